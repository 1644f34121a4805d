// Concrete experiments as probability tables: the three-switch arrangement
// with GHZ-entangled controls, the single-switch chained arrangement with a
// Bell-pair ancilla, and a plain three-qubit reference without switches.
// All probabilities are exact Born values; inputs are uniformly distributed.

#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchlab/instruments.hpp"
#include "switchlab/matrix.hpp"
#include "switchlab/tables.hpp"

namespace switchlab {

struct GhzScenarioConfig {
    // Depolarizing strength applied to the joint control state only;
    // 0 keeps the exact GHZ correlations.
    double depolarizing = 0.0;
};

struct ChainedScenarioConfig {
    int n = 2; // number of chain links; settings x3, y range over {0..n}
};

struct ScenarioInfo {
    std::string kind;         // "ghz-three-switch", "chained-switch", "ghz-reference"
    double depolarizing = 0.0;
    int n = 0;
};

struct ScenarioData {
    ScenarioInfo info;
    ProbTable conditional; // outputs given inputs, normalized per input cell
    ProbTable joint;       // conditional weighted by the uniform input distribution
    PossTable poss;        // possibilized joint
};

namespace detail {

/// Dense effect grid of a destructive instrument: outcome labels are packed
/// little-endian-by-position into an index; absent outcomes stay zero.
inline std::vector<Matrix> effect_grid(const Instrument& inst, std::size_t label_count) {
    const std::size_t cells = std::size_t{1} << label_count;
    std::vector<Matrix> grid(cells, Matrix::zero(inst.in_dim(), inst.in_dim()));
    for (const auto& oc : inst.outcomes) {
        if (oc.labels.size() != label_count) {
            throw std::logic_error("effect_grid: unexpected outcome arity");
        }
        std::size_t key = 0;
        for (int l : oc.labels) key = key * 2 + static_cast<std::size_t>(l);
        grid[key] += oc.map.effect();
    }
    return grid;
}

} // namespace detail

/// Plain three-qubit GHZ experiment: each party measures Y for input 0 and
/// X for input 1. Variables (a,b,c,x,y,z).
inline ScenarioData build_ghz_reference() {
    const Matrix rho = projector(states::ghz(3));
    const std::array<std::vector<Matrix>, 2> meas = {
        detail::effect_grid(y_basis_measurement(), 1),
        detail::effect_grid(angle_measurement(std::numbers::pi / 2.0), 1), // X basis
    };

    ScenarioData d;
    d.info.kind = "ghz-reference";
    std::vector<VarSpec> vars = {{"a", 2}, {"b", 2}, {"c", 2}, {"x", 2}, {"y", 2}, {"z", 2}};
    d.conditional = ProbTable(vars);
    d.joint = ProbTable(vars);

    std::vector<int> digits(6);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int z = 0; z < 2; ++z) {
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        for (int c = 0; c < 2; ++c) {
                            const Matrix eff = tensor_product(
                                tensor_product(meas[x][a], meas[y][b]), meas[z][c]);
                            const double p = (eff * rho).trace().real();
                            digits = {a, b, c, x, y, z};
                            const std::size_t f = d.conditional.shape().flat(digits);
                            d.conditional[f] = p;
                            d.joint[f] = p / 8.0;
                        }
                    }
                }
            }
        }
    }
    d.poss = possibilize(d.joint);
    return d;
}

/// Three X-controlled switches with GHZ-entangled control qubits, targets in
/// |0>, agent pairs inside each switch, and Y measurements on the output
/// controls. Variables (a1,a2,a3,b1,b2,b3,c1,c2,c3,x1,x2,y1,y2,z1,z2).
inline ScenarioData build_ghz_three_switch(const GhzScenarioConfig& cfg = {}) {
    if (cfg.depolarizing < 0.0 || cfg.depolarizing > 1.0) {
        throw std::invalid_argument("build_ghz_three_switch: depolarizing strength must be in [0,1]");
    }
    Matrix rho = projector(states::ghz(3));
    if (cfg.depolarizing > 0.0) {
        rho = cplx{1.0 - cfg.depolarizing, 0.0} * rho
              + cplx{cfg.depolarizing / 8.0, 0.0} * Matrix::identity(8);
    }

    // The same wing instrument serves all three switches.
    std::array<std::vector<Matrix>, 4> eff; // indexed by x1*2+x2, grid over (o1,o2,o3)
    for (int x1 = 0; x1 < 2; ++x1) {
        for (int x2 = 0; x2 < 2; ++x2) {
            eff[static_cast<std::size_t>(x1 * 2 + x2)] = detail::effect_grid(
                joint_switch_instrument(x1, x2, y_basis_measurement(), ControlBasis::XBasis), 3);
        }
    }

    ScenarioData d;
    d.info.kind = "ghz-three-switch";
    d.info.depolarizing = cfg.depolarizing;
    std::vector<VarSpec> vars = {{"a1", 2}, {"a2", 2}, {"a3", 2}, {"b1", 2}, {"b2", 2},
                                 {"b3", 2}, {"c1", 2}, {"c2", 2}, {"c3", 2}, {"x1", 2},
                                 {"x2", 2}, {"y1", 2}, {"y2", 2}, {"z1", 2}, {"z2", 2}};
    d.conditional = ProbTable(vars);
    d.joint = ProbTable(vars);

    std::vector<int> digits(15);
    for (std::size_t xa = 0; xa < 4; ++xa) {
        for (std::size_t xb = 0; xb < 4; ++xb) {
            for (std::size_t xc = 0; xc < 4; ++xc) {
                for (std::size_t oa = 0; oa < 8; ++oa) {
                    if (eff[xa][oa].max_abs() == 0.0) continue;
                    for (std::size_t ob = 0; ob < 8; ++ob) {
                        if (eff[xb][ob].max_abs() == 0.0) continue;
                        const Matrix ab = tensor_product(eff[xa][oa], eff[xb][ob]);
                        for (std::size_t oc = 0; oc < 8; ++oc) {
                            if (eff[xc][oc].max_abs() == 0.0) continue;
                            const double p = (tensor_product(ab, eff[xc][oc]) * rho).trace().real();
                            digits = {static_cast<int>(oa >> 2), static_cast<int>((oa >> 1) & 1),
                                      static_cast<int>(oa & 1),  static_cast<int>(ob >> 2),
                                      static_cast<int>((ob >> 1) & 1), static_cast<int>(ob & 1),
                                      static_cast<int>(oc >> 2), static_cast<int>((oc >> 1) & 1),
                                      static_cast<int>(oc & 1),  static_cast<int>(xa >> 1),
                                      static_cast<int>(xa & 1),  static_cast<int>(xb >> 1),
                                      static_cast<int>(xb & 1),  static_cast<int>(xc >> 1),
                                      static_cast<int>(xc & 1)};
                            const std::size_t f = d.conditional.shape().flat(digits);
                            d.conditional[f] = p;
                            d.joint[f] = p / 64.0;
                        }
                    }
                }
            }
        }
    }
    d.poss = possibilize(d.joint);
    return d;
}

struct ConditionCheck {
    std::string name;
    bool pass = false;
    double violating_mass = 0.0;
};

struct SwitchDataReport {
    std::vector<ConditionCheck> conditions;

    bool all_pass() const {
        for (const auto& c : conditions) {
            if (!c.pass) return false;
        }
        return true;
    }
};

/// The four parity implications plus the three per-switch zero conditions,
/// evaluated as violating probability masses on the joint table.
inline SwitchDataReport verify_switch_data_conditions(const ScenarioData& d,
                                                      double mass_tol = 1e-12) {
    const ProbTable& t = d.joint;
    SwitchDataReport rep;

    auto mass_where = [&](const Event& sel, const Event* excluded) {
        const Event::Compiled s(sel, t.shape());
        std::unique_ptr<Event::Compiled> ex;
        if (excluded) ex = std::make_unique<Event::Compiled>(*excluded, t.shape());
        double m = 0.0;
        for (std::size_t f = 0; f < t.size(); ++f) {
            if (t[f] == 0.0) continue;
            if (!s.matches(t.shape(), f)) continue;
            if (ex && ex->matches(t.shape(), f)) continue;
            m += t[f];
        }
        return m;
    };

    auto add_parity = [&](const std::string& name, std::vector<std::pair<std::string, int>> in,
                          std::vector<std::string> outs, int target) {
        const Event sel = Event::assign(std::move(in));
        const Event good = Event::parity(std::move(outs), target);
        ConditionCheck c;
        c.name = name;
        c.violating_mass = mass_where(sel, &good);
        c.pass = c.violating_mass < mass_tol;
        rep.conditions.push_back(std::move(c));
    };

    add_parity("parity_x11_y11_z11", {{"x1", 1}, {"x2", 1}, {"y1", 1}, {"y2", 1}, {"z1", 1}, {"z2", 1}},
               {"a1", "b1", "c1"}, 0);
    add_parity("parity_x11_y00_z00", {{"x1", 1}, {"x2", 1}, {"y1", 0}, {"y2", 0}, {"z1", 0}, {"z2", 0}},
               {"a1", "b3", "c3"}, 1);
    add_parity("parity_x00_y11_z00", {{"x1", 0}, {"x2", 0}, {"y1", 1}, {"y2", 1}, {"z1", 0}, {"z2", 0}},
               {"a3", "b1", "c3"}, 1);
    add_parity("parity_x00_y00_z11", {{"x1", 0}, {"x2", 0}, {"y1", 0}, {"y2", 0}, {"z1", 1}, {"z2", 1}},
               {"a3", "b3", "c1"}, 1);

    const std::array<std::array<std::string, 4>, 3> wings = {{{"a1", "a2", "x1", "x2"},
                                                              {"b1", "b2", "y1", "y2"},
                                                              {"c1", "c2", "z1", "z2"}}};
    const std::array<std::string, 3> tags = {"A", "B", "C"};
    for (std::size_t w = 0; w < 3; ++w) {
        const auto& [o1, o2, i1, i2] = wings[w];
        auto add_zero = [&](const std::string& name, std::vector<std::pair<std::string, int>> where) {
            ConditionCheck c;
            c.name = name;
            c.violating_mass = mass_where(Event::assign(std::move(where)), nullptr);
            c.pass = c.violating_mass < mass_tol;
            rep.conditions.push_back(std::move(c));
        };
        add_zero("zero_" + tags[w] + "_" + o1 + "1_" + i2 + "0", {{o1, 1}, {i2, 0}});
        add_zero("zero_" + tags[w] + "_" + o2 + "1_" + i1 + "0", {{o2, 1}, {i1, 0}});
        add_zero("zero_" + tags[w] + "_" + o1 + o2 + "00_" + i1 + i2 + "11",
                 {{o1, 0}, {o2, 0}, {i1, 1}, {i2, 1}});
    }
    return rep;
}

inline double chained_theta(int n) { return std::numbers::pi / (n + 1); }

/// Same-party angle gap of the chained schedule. The first-party direction
/// for setting 0 is pinned to +Z by the switch simulation, which forces the
/// chain of 2n+2 directions to wrap the Bloch circle if spaced uniformly by
/// theta; that wrap turns the anti-correlated closing pair into a correlated
/// one and caps the chain total at 2n cos^2(theta/2). The gap g in
/// (theta, 2*theta) below restores the ideal total
/// (n+1)(cos(pi/(n+1)) + 1) - 1 while keeping every same-index pair exactly
/// theta apart.
inline double chained_gap(int n) {
    const double theta = chained_theta(n);
    const double c = std::cos(theta / 2.0) * std::cos(theta / 2.0);
    auto excess = [&](double g) {
        const double cross = std::cos((g - theta) / 2.0);
        const double close = std::cos((n * g + theta) / 2.0);
        return n * cross * cross - close * close - (n + 1) * c + 1.0;
    };
    double lo = theta, hi = 2.0 * theta;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Measurement direction (Bloch angle in the Z-X plane) of the switch-side
/// party for setting j; j=0 is the computational-basis direction realized
/// through the switch.
inline double chained_angle_a(int n, int j) { return j * chained_gap(n); }

/// Direction of the ancilla-side party for setting i; offset theta from the
/// same-index switch-side direction.
inline double chained_angle_b(int n, int i) {
    return chained_angle_a(n, i) + chained_theta(n);
}

/// Single Z-controlled switch whose input control is half of a Bell pair;
/// the other half is measured by the ancilla party. Variables
/// (a1,a2,a3,b,x1,x2,x3,y) with x3,y in {0..n}.
inline ScenarioData build_chained_switch(const ChainedScenarioConfig& cfg) {
    const int n = cfg.n;
    if (n < 2) throw std::invalid_argument("build_chained_switch: n must be at least 2");

    const Matrix rho = projector(states::bell_phi_plus());

    ScenarioData d;
    d.info.kind = "chained-switch";
    d.info.n = n;
    std::vector<VarSpec> vars = {{"a1", 2}, {"a2", 2}, {"a3", 2}, {"b", 2},
                                 {"x1", 2}, {"x2", 2}, {"x3", n + 1}, {"y", n + 1}};
    d.conditional = ProbTable(vars);
    d.joint = ProbTable(vars);
    const double input_cells = 4.0 * (n + 1) * (n + 1);

    std::vector<std::vector<Matrix>> b_eff(n + 1);
    for (int y = 0; y <= n; ++y) {
        b_eff[y] = detail::effect_grid(angle_measurement(chained_angle_b(n, y)), 1);
    }

    std::vector<int> digits(8);
    for (int x1 = 0; x1 < 2; ++x1) {
        for (int x2 = 0; x2 < 2; ++x2) {
            for (int x3 = 0; x3 <= n; ++x3) {
                const auto a_eff = detail::effect_grid(
                    joint_switch_instrument(x1, x2, angle_measurement(chained_angle_a(n, x3)),
                                            ControlBasis::ZBasis),
                    3);
                for (std::size_t oa = 0; oa < 8; ++oa) {
                    if (a_eff[oa].max_abs() == 0.0) continue;
                    for (int y = 0; y <= n; ++y) {
                        for (int b = 0; b < 2; ++b) {
                            const double p =
                                (tensor_product(a_eff[oa], b_eff[y][b]) * rho).trace().real();
                            digits = {static_cast<int>(oa >> 2), static_cast<int>((oa >> 1) & 1),
                                      static_cast<int>(oa & 1),  b,
                                      x1,                        x2,
                                      x3,                        y};
                            const std::size_t f = d.conditional.shape().flat(digits);
                            d.conditional[f] = p;
                            d.joint[f] = p / input_cells;
                        }
                    }
                }
            }
        }
    }
    d.poss = possibilize(d.joint);
    return d;
}

struct ChainedRestriction {
    ProbTable r;  // (a, b, x3, y), normalized per (x3, y)
    double alpha = 0.0;
};

/// Selects the chain-relevant slice of a chained joint: for x3=0 the
/// switch-side outcome is a1 under x1=x2=1 (the simulated computational-basis
/// measurement), otherwise a3 under x1=x2=0. Extra variables (hidden-order
/// labels, ...) are summed out. alpha collects the three forced-outcome
/// deviation terms.
inline ChainedRestriction restrict_chained(const ProbTable& joint, int n) {
    const auto& shape = joint.shape();
    const std::size_t ia1 = shape.index_of("a1");
    const std::size_t ia2 = shape.index_of("a2");
    const std::size_t ia3 = shape.index_of("a3");
    const std::size_t ib = shape.index_of("b");
    const std::size_t ix1 = shape.index_of("x1");
    const std::size_t ix2 = shape.index_of("x2");
    const std::size_t ix3 = shape.index_of("x3");
    const std::size_t iy = shape.index_of("y");
    if (shape.vars()[ix3].card != n + 1 || shape.vars()[iy].card != n + 1) {
        throw std::invalid_argument("restrict_chained: table does not cover settings 0..n");
    }

    ChainedRestriction out;
    out.r = ProbTable({{"a", 2}, {"b", 2}, {"x3", n + 1}, {"y", n + 1}});
    std::vector<double> cell_mass(static_cast<std::size_t>((n + 1) * (n + 1)), 0.0);

    double a1_num = 0.0, a1_den = 0.0;
    double a2_num = 0.0, a2_den = 0.0;
    double a00_num = 0.0, a00_den = 0.0;

    std::vector<int> rd(4);
    for (std::size_t f = 0; f < joint.size(); ++f) {
        const double v = joint[f];
        if (v == 0.0) continue;
        const int x1 = shape.digit(f, ix1);
        const int x2 = shape.digit(f, ix2);
        const int a1 = shape.digit(f, ia1);
        const int a2 = shape.digit(f, ia2);

        if (x1 == 1 && x2 == 0) {
            a1_den += v;
            if (a1 == 1) a1_num += v;
        } else if (x1 == 0 && x2 == 1) {
            a2_den += v;
            if (a2 == 1) a2_num += v;
        } else if (x1 == 1 && x2 == 1) {
            a00_den += v;
            if (a1 == 0 && a2 == 0) a00_num += v;
        }

        const int x3 = shape.digit(f, ix3);
        const int y = shape.digit(f, iy);
        int a;
        if (x3 == 0) {
            if (x1 != 1 || x2 != 1) continue;
            a = a1;
        } else {
            if (x1 != 0 || x2 != 0) continue;
            a = shape.digit(f, ia3);
        }
        rd = {a, shape.digit(f, ib), x3, y};
        out.r[out.r.shape().flat(rd)] += v;
        cell_mass[static_cast<std::size_t>(x3) * (n + 1) + y] += v;
    }

    for (int x3 = 0; x3 <= n; ++x3) {
        for (int y = 0; y <= n; ++y) {
            const double m = cell_mass[static_cast<std::size_t>(x3) * (n + 1) + y];
            if (m <= 1e-12) {
                throw std::invalid_argument("restrict_chained: a setting cell has no support");
            }
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    rd = {a, b, x3, y};
                    out.r[out.r.shape().flat(rd)] /= m;
                }
            }
        }
    }

    if (a1_den <= 1e-12 || a2_den <= 1e-12 || a00_den <= 1e-12) {
        throw std::invalid_argument("restrict_chained: missing support for alpha terms");
    }
    out.alpha = a1_num / a1_den + a2_num / a2_den + a00_num / a00_den;
    return out;
}

inline ChainedRestriction restrict_chained(const ScenarioData& d, int n) {
    return restrict_chained(d.joint, n);
}

} // namespace switchlab
