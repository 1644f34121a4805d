// Inequality evaluators: CHSH-style expressions on (a,b|x3,y) tables, the
// chained Braunstein-Caves sum, the causal Mermin combination with its
// forced-outcome penalty terms, and the closed-form causal-fraction bound.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchlab/scenarios.hpp"
#include "switchlab/tables.hpp"

namespace switchlab {

namespace detail {

/// Per-setting equality probability R(a=b | x3, y), renormalized within the
/// setting cell so both joint and conditional tables are accepted.
class EqualityGrid {
public:
    explicit EqualityGrid(const ProbTable& r) {
        const auto& shape = r.shape();
        const std::size_t ia = shape.index_of("a");
        const std::size_t ib = shape.index_of("b");
        const std::size_t ix = shape.index_of("x3");
        const std::size_t iy = shape.index_of("y");
        if (shape.vars()[ia].card != 2 || shape.vars()[ib].card != 2) {
            throw std::invalid_argument("EqualityGrid: outcomes must be binary");
        }
        nx_ = shape.vars()[ix].card;
        ny_ = shape.vars()[iy].card;
        eq_.assign(static_cast<std::size_t>(nx_) * ny_, 0.0);
        std::vector<double> mass(eq_.size(), 0.0);
        for (std::size_t f = 0; f < r.size(); ++f) {
            const double v = r[f];
            if (v == 0.0) continue;
            const std::size_t cell = static_cast<std::size_t>(shape.digit(f, ix)) * ny_
                                     + static_cast<std::size_t>(shape.digit(f, iy));
            mass[cell] += v;
            if (shape.digit(f, ia) == shape.digit(f, ib)) eq_[cell] += v;
        }
        for (std::size_t i = 0; i < eq_.size(); ++i) {
            if (mass[i] <= 1e-12) {
                throw std::invalid_argument("EqualityGrid: setting cell without support");
            }
            eq_[i] /= mass[i];
        }
    }

    double operator()(int x3, int y) const {
        if (x3 < 0 || x3 >= nx_ || y < 0 || y >= ny_) {
            throw std::out_of_range("equality probability: setting index out of range");
        }
        return eq_[static_cast<std::size_t>(x3) * ny_ + static_cast<std::size_t>(y)];
    }

    int settings_a() const { return nx_; }
    int settings_b() const { return ny_; }

private:
    int nx_ = 0, ny_ = 0;
    std::vector<double> eq_;
};

} // namespace detail

/// R(a=b|xi0,up0) + R(a=b|xi1,up0) + R(a=b|xi1,up1) - R(a=b|xi0,up1).
inline double chsh_expr(const ProbTable& r, int xi0, int xi1, int up0, int up1) {
    const detail::EqualityGrid eq(r);
    return eq(xi0, up0) + eq(xi1, up0) + eq(xi1, up1) - eq(xi0, up1);
}

/// The 2n+2-term chained sum
///   sum_{i=0}^{n-1} [R(a=b|i,i) + R(a=b|i+1,i)] + R(a=b|n,n) - R(a=b|0,n).
/// Equals sum_{i=1}^{n} CHSH_{0,i;i-1,i} identically.
inline double eval_bc(const ProbTable& r, int n) {
    const detail::EqualityGrid eq(r);
    if (eq.settings_a() < n + 1 || eq.settings_b() < n + 1) {
        throw std::invalid_argument("eval_bc: table does not cover settings 0..n");
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += eq(i, i) + eq(i + 1, i);
    total += eq(n, n) - eq(0, n);
    return total;
}

struct MerminReport {
    std::array<double, 4> parity_terms{}; // settings 111, 100, 010, 001
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double total = 0.0;
    double classical_bound = 3.0;
    double algebraic_max = 4.0;
    bool violated = false;
};

/// Evaluates the causal Mermin combination on any table carrying the nine
/// output and six input variables (extra variables are summed over):
/// four parity-success probabilities at the extremal settings minus twice the
/// per-wing forced-outcome deviations. Input marginals follow the
/// all-but-listed-variables convention.
inline MerminReport eval_causal_mermin(const ProbTable& t) {
    const auto& shape = t.shape();
    const std::array<const char*, 9> out_names = {"a1", "a2", "a3", "b1", "b2",
                                                  "b3", "c1", "c2", "c3"};
    const std::array<const char*, 6> in_names = {"x1", "x2", "y1", "y2", "z1", "z2"};
    std::array<std::size_t, 9> oi{};
    std::array<std::size_t, 6> ii{};
    for (std::size_t k = 0; k < 9; ++k) oi[k] = shape.index_of(out_names[k]);
    for (std::size_t k = 0; k < 6; ++k) ii[k] = shape.index_of(in_names[k]);

    // Parity terms: {setting pattern for (x1..z2), parity digit triple, target}.
    struct ParitySpec {
        std::array<int, 6> inputs;
        std::array<std::size_t, 3> outs; // indices into oi
        int target;
    };
    const std::array<ParitySpec, 4> parities = {{
        {{1, 1, 1, 1, 1, 1}, {0, 3, 6}, 0}, // a1 ^ b1 ^ c1 = 0
        {{1, 1, 0, 0, 0, 0}, {0, 5, 8}, 1}, // a1 ^ b3 ^ c3 = 1
        {{0, 0, 1, 1, 0, 0}, {2, 3, 8}, 1}, // a3 ^ b1 ^ c3 = 1
        {{0, 0, 0, 0, 1, 1}, {2, 5, 6}, 1}, // a3 ^ b3 ^ c1 = 1
    }};

    std::array<double, 4> pnum{}, pden{};
    // Per wing: conditioned on its own input pair being 10 / 01 / 11.
    std::array<std::array<double, 3>, 3> wnum{}, wden{};

    std::vector<int> digits(shape.var_count(), 0);
    for (std::size_t f = 0; f < t.size(); ++f) {
        const double v = t[f];
        if (v != 0.0) {
            std::array<int, 9> o;
            std::array<int, 6> in;
            for (std::size_t k = 0; k < 9; ++k) o[k] = digits[oi[k]];
            for (std::size_t k = 0; k < 6; ++k) in[k] = digits[ii[k]];

            for (std::size_t p = 0; p < 4; ++p) {
                if (in == parities[p].inputs) {
                    pden[p] += v;
                    int par = 0;
                    for (std::size_t j : parities[p].outs) par ^= o[j];
                    if (par == parities[p].target) pnum[p] += v;
                }
            }

            for (std::size_t w = 0; w < 3; ++w) {
                const int i1 = in[2 * w], i2 = in[2 * w + 1];
                const int o1 = o[3 * w], o2 = o[3 * w + 1];
                if (i1 == 1 && i2 == 0) {
                    wden[w][0] += v;
                    if (o1 == 1) wnum[w][0] += v;
                } else if (i1 == 0 && i2 == 1) {
                    wden[w][1] += v;
                    if (o2 == 1) wnum[w][1] += v;
                } else if (i1 == 1 && i2 == 1) {
                    wden[w][2] += v;
                    if (o1 == 0 && o2 == 0) wnum[w][2] += v;
                }
            }
        }
        // Odometer increment (last variable fastest).
        for (std::size_t k = shape.var_count(); k-- > 0;) {
            if (++digits[k] < shape.vars()[k].card) break;
            digits[k] = 0;
        }
    }

    MerminReport rep;
    for (std::size_t p = 0; p < 4; ++p) {
        if (pden[p] <= 1e-12) {
            throw std::invalid_argument("eval_causal_mermin: a setting block has no mass");
        }
        rep.parity_terms[p] = pnum[p] / pden[p];
    }
    std::array<double, 3> wing_sums{};
    for (std::size_t w = 0; w < 3; ++w) {
        for (std::size_t k = 0; k < 3; ++k) {
            if (wden[w][k] <= 1e-12) {
                throw std::invalid_argument("eval_causal_mermin: an input block has no mass");
            }
            wing_sums[w] += wnum[w][k] / wden[w][k];
        }
    }
    rep.alpha = wing_sums[0];
    rep.beta = wing_sums[1];
    rep.gamma = wing_sums[2];
    rep.total = rep.parity_terms[0] + rep.parity_terms[1] + rep.parity_terms[2]
                + rep.parity_terms[3] - 2.0 * (rep.alpha + rep.beta + rep.gamma);
    rep.violated = rep.total > rep.classical_bound + 1e-9;
    return rep;
}

inline MerminReport eval_causal_mermin(const ScenarioData& d) {
    return eval_causal_mermin(d.joint);
}

/// (n+1)(1 - cos(pi/(n+1))): the ceiling on the definite-causal-order
/// fraction implied by reaching the ideal chain value.
inline double causal_fraction_bound(int n) {
    if (n < 2) throw std::invalid_argument("causal_fraction_bound: n must be at least 2");
    return (n + 1) * (1.0 - std::cos(std::numbers::pi / (n + 1)));
}

struct ChainReport {
    int n = 0;
    double bc_value = 0.0;
    double alpha = 0.0;
    double constrained_value = 0.0; // bc_value - 2n * alpha
    double classical_bound = 0.0;   // 2n
    double algebraic_max = 0.0;     // 2n + 1
    double closed_form = 0.0;       // (n+1)(cos(pi/(n+1)) + 1) - 1
    double causal_fraction_bound = 0.0;
    bool violated = false;
};

inline ChainReport eval_chain_causal(const ScenarioData& d, int n) {
    if (d.info.kind != "chained-switch" || d.info.n != n) {
        throw std::invalid_argument("eval_chain_causal: scenario does not match n");
    }
    const ChainedRestriction res = restrict_chained(d, n);
    ChainReport rep;
    rep.n = n;
    rep.bc_value = eval_bc(res.r, n);
    rep.alpha = res.alpha;
    rep.constrained_value = rep.bc_value - 2.0 * n * rep.alpha;
    rep.classical_bound = 2.0 * n;
    rep.algebraic_max = 2.0 * n + 1.0;
    rep.closed_form = (n + 1) * (std::cos(std::numbers::pi / (n + 1)) + 1.0) - 1.0;
    rep.causal_fraction_bound = causal_fraction_bound(n);
    rep.violated = rep.constrained_value > rep.classical_bound + 1e-9;
    return rep;
}

} // namespace switchlab
