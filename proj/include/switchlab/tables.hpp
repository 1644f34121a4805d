// Dense joint distributions over named finite variables, in real-probability
// and Boolean-possibility semantics, plus the queries the causal arguments
// need: marginalization, conditioning, independence, implication, and the
// union-bound-style inequality on event lists.
//
// Indexing convention: flat index is mixed-radix with the first variable most
// significant. Variable order is fixed at construction.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchlab/matrix.hpp" // tolerance constants

namespace switchlab {

struct VarSpec {
    std::string name;
    int card = 2;
};

/// Shared shape logic for both table kinds.
class TableShape {
public:
    TableShape() = default;

    explicit TableShape(std::vector<VarSpec> vars) : vars_(std::move(vars)) {
        std::size_t n = 1;
        for (const auto& v : vars_) {
            if (v.card <= 0) throw std::invalid_argument("TableShape: cardinality must be positive");
            for (const auto& w : vars_) {
                if (&v != &w && v.name == w.name) {
                    throw std::invalid_argument("TableShape: duplicate variable name " + v.name);
                }
            }
            n *= static_cast<std::size_t>(v.card);
        }
        size_ = n;
        strides_.assign(vars_.size(), 1);
        for (std::size_t i = vars_.size(); i-- > 1;) {
            strides_[i - 1] = strides_[i] * static_cast<std::size_t>(vars_[i].card);
        }
    }

    const std::vector<VarSpec>& vars() const { return vars_; }
    std::size_t var_count() const { return vars_.size(); }
    std::size_t size() const { return size_; }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i].name == name) return i;
        }
        throw std::invalid_argument("TableShape: unknown variable " + name);
    }

    bool has_var(const std::string& name) const {
        for (const auto& v : vars_) {
            if (v.name == name) return true;
        }
        return false;
    }

    int digit(std::size_t flat, std::size_t var) const {
        return static_cast<int>((flat / strides_[var]) % static_cast<std::size_t>(vars_[var].card));
    }

    std::size_t flat(const std::vector<int>& digits) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            idx += strides_[i] * static_cast<std::size_t>(digits[i]);
        }
        return idx;
    }

    void decode(std::size_t flat, std::vector<int>& digits) const {
        digits.resize(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) digits[i] = digit(flat, i);
    }

private:
    std::vector<VarSpec> vars_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

class ProbTable {
public:
    ProbTable() = default;

    explicit ProbTable(std::vector<VarSpec> vars)
        : shape_(std::move(vars)), values_(shape_.size(), 0.0) {}

    ProbTable(std::vector<VarSpec> vars, std::vector<double> values)
        : shape_(std::move(vars)), values_(std::move(values)) {
        if (values_.size() != shape_.size()) {
            throw std::invalid_argument("ProbTable: value count does not match variable grid");
        }
    }

    const TableShape& shape() const { return shape_; }
    const std::vector<VarSpec>& vars() const { return shape_.vars(); }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    double total_mass() const {
        double t = 0.0;
        for (double v : values_) t += v;
        return t;
    }

    /// True when the masses within every assignment of `given` sum to 1.
    bool normalizes_per_cell(const std::vector<std::string>& given,
                             double tol = kPhysicalTol) const {
        std::vector<std::size_t> gidx;
        for (const auto& g : given) gidx.push_back(shape_.index_of(g));
        std::size_t cells = 1;
        for (std::size_t i : gidx) cells *= static_cast<std::size_t>(vars()[i].card);
        std::vector<double> sums(cells, 0.0);
        for (std::size_t f = 0; f < values_.size(); ++f) {
            std::size_t key = 0;
            for (std::size_t i : gidx) {
                key = key * static_cast<std::size_t>(vars()[i].card)
                      + static_cast<std::size_t>(shape_.digit(f, i));
            }
            sums[key] += values_[f];
        }
        for (double s : sums) {
            if (std::abs(s - 1.0) > tol) return false;
        }
        return true;
    }

private:
    TableShape shape_;
    std::vector<double> values_;
};

class PossTable {
public:
    PossTable() = default;

    explicit PossTable(std::vector<VarSpec> vars)
        : shape_(std::move(vars)), values_(shape_.size(), 0) {}

    PossTable(std::vector<VarSpec> vars, std::vector<std::uint8_t> values)
        : shape_(std::move(vars)), values_(std::move(values)) {
        if (values_.size() != shape_.size()) {
            throw std::invalid_argument("PossTable: value count does not match variable grid");
        }
    }

    const TableShape& shape() const { return shape_; }
    const std::vector<VarSpec>& vars() const { return shape_.vars(); }
    std::size_t size() const { return values_.size(); }

    std::uint8_t& operator[](std::size_t i) { return values_[i]; }
    std::uint8_t operator[](std::size_t i) const { return values_[i]; }
    const std::vector<std::uint8_t>& values() const { return values_; }

    bool any_possible() const {
        for (auto v : values_) {
            if (v) return true;
        }
        return false;
    }

    std::size_t support_size() const {
        std::size_t n = 0;
        for (auto v : values_) n += (v != 0);
        return n;
    }

private:
    TableShape shape_;
    std::vector<std::uint8_t> values_;
};

/// Either a conjunction of assignments {var=value,...} or a parity predicate
/// (XOR of a set of binary variables equals a target bit).
class Event {
public:
    enum class Kind { Assignment, Parity };

    static Event assign(std::vector<std::pair<std::string, int>> pairs) {
        Event e;
        e.kind_ = Kind::Assignment;
        e.assignments_ = std::move(pairs);
        return e;
    }

    static Event parity(std::vector<std::string> vars, int target) {
        Event e;
        e.kind_ = Kind::Parity;
        e.parity_vars_ = std::move(vars);
        e.parity_target_ = target & 1;
        return e;
    }

    Kind kind() const { return kind_; }
    const std::vector<std::pair<std::string, int>>& assignments() const { return assignments_; }
    const std::vector<std::string>& parity_vars() const { return parity_vars_; }
    int parity_target() const { return parity_target_; }

    /// Resolve variable names against a shape once; evaluate per flat index.
    class Compiled {
    public:
        Compiled(const Event& e, const TableShape& shape) : kind_(e.kind_) {
            if (kind_ == Kind::Assignment) {
                for (const auto& [name, val] : e.assignments_) {
                    const std::size_t i = shape.index_of(name);
                    if (val < 0 || val >= shape.vars()[i].card) {
                        throw std::invalid_argument("Event: value out of range for " + name);
                    }
                    idx_val_.emplace_back(i, val);
                }
            } else {
                for (const auto& name : e.parity_vars_) {
                    const std::size_t i = shape.index_of(name);
                    if (shape.vars()[i].card != 2) {
                        throw std::invalid_argument("Event: parity variable " + name + " is not binary");
                    }
                    idx_.push_back(i);
                }
                target_ = e.parity_target_;
            }
        }

        bool matches(const TableShape& shape, std::size_t flat) const {
            if (kind_ == Kind::Assignment) {
                for (const auto& [i, v] : idx_val_) {
                    if (shape.digit(flat, i) != v) return false;
                }
                return true;
            }
            int p = 0;
            for (std::size_t i : idx_) p ^= shape.digit(flat, i);
            return p == target_;
        }

    private:
        Kind kind_;
        std::vector<std::pair<std::size_t, int>> idx_val_;
        std::vector<std::size_t> idx_;
        int target_ = 0;
    };

private:
    Kind kind_ = Kind::Assignment;
    std::vector<std::pair<std::string, int>> assignments_;
    std::vector<std::string> parity_vars_;
    int parity_target_ = 0;
};

/// pi(P): cell -> 1 iff probability > eps.
inline PossTable possibilize(const ProbTable& t, double eps = 1e-9) {
    if (eps < 0) throw std::invalid_argument("possibilize: eps must be nonnegative");
    PossTable out(t.vars());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i] > eps ? 1 : 0;
    return out;
}

namespace detail {

struct MarginalPlan {
    std::vector<VarSpec> kept_vars;
    std::vector<std::size_t> kept_idx; // indices into the source shape
};

inline MarginalPlan marginal_plan(const TableShape& shape, const std::vector<std::string>& keep) {
    MarginalPlan plan;
    for (const auto& name : keep) shape.index_of(name); // validate
    for (std::size_t i = 0; i < shape.var_count(); ++i) {
        const auto& v = shape.vars()[i];
        if (std::find(keep.begin(), keep.end(), v.name) != keep.end()) {
            plan.kept_vars.push_back(v);
            plan.kept_idx.push_back(i);
        }
    }
    return plan;
}

inline std::size_t project(const TableShape& src, std::size_t flat, const TableShape& dst,
                           const std::vector<std::size_t>& kept_idx) {
    std::vector<int> digits(kept_idx.size());
    for (std::size_t j = 0; j < kept_idx.size(); ++j) digits[j] = src.digit(flat, kept_idx[j]);
    return dst.flat(digits);
}

} // namespace detail

/// Sum out everything not in `keep`; kept variables stay in original order.
inline ProbTable marginalize(const ProbTable& t, const std::vector<std::string>& keep) {
    auto plan = detail::marginal_plan(t.shape(), keep);
    ProbTable out(plan.kept_vars);
    for (std::size_t f = 0; f < t.size(); ++f) {
        out[detail::project(t.shape(), f, out.shape(), plan.kept_idx)] += t[f];
    }
    return out;
}

/// Boolean-OR marginal.
inline PossTable marginalize(const PossTable& t, const std::vector<std::string>& keep) {
    auto plan = detail::marginal_plan(t.shape(), keep);
    PossTable out(plan.kept_vars);
    for (std::size_t f = 0; f < t.size(); ++f) {
        if (t[f]) out[detail::project(t.shape(), f, out.shape(), plan.kept_idx)] = 1;
    }
    return out;
}

/// Renormalized slice; the conditioned variables are dropped from the result.
inline ProbTable condition(const ProbTable& t,
                           const std::vector<std::pair<std::string, int>>& on) {
    const Event::Compiled ev(Event::assign(on), t.shape());
    std::vector<std::string> keep;
    for (const auto& v : t.vars()) {
        bool conditioned = false;
        for (const auto& [name, val] : on) {
            if (name == v.name) conditioned = true;
        }
        if (!conditioned) keep.push_back(v.name);
    }
    auto plan = detail::marginal_plan(t.shape(), keep);
    ProbTable out(plan.kept_vars);
    double mass = 0.0;
    for (std::size_t f = 0; f < t.size(); ++f) {
        if (!ev.matches(t.shape(), f)) continue;
        mass += t[f];
        out[detail::project(t.shape(), f, out.shape(), plan.kept_idx)] += t[f];
    }
    if (mass <= 1e-12) throw std::invalid_argument("condition: conditioning cell has no mass");
    for (std::size_t f = 0; f < out.size(); ++f) out[f] /= mass;
    return out;
}

struct IndependenceReport {
    bool independent = false;
    double max_violation = 0.0;
};

/// Conditioning context for independence checks: none, a set of variables,
/// or a fixed assignment slice.
struct Given {
    std::vector<std::string> vars;
    std::vector<std::pair<std::string, int>> assignment;

    static Given none() { return {}; }
    static Given on_vars(std::vector<std::string> v) { return {std::move(v), {}}; }
    static Given at(std::vector<std::pair<std::string, int>> a) { return {{}, std::move(a)}; }

    bool is_none() const { return vars.empty() && assignment.empty(); }
};

namespace detail {

inline void check_disjoint(const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                           const std::vector<std::string>& cs) {
    auto overlap = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        for (const auto& x : a) {
            if (std::find(b.begin(), b.end(), x) != b.end()) return true;
        }
        return false;
    };
    if (overlap(xs, ys) || overlap(xs, cs) || overlap(ys, cs)) {
        throw std::invalid_argument("check_independence: variable sets must be disjoint");
    }
}

/// Group key over a subset of variables.
inline std::size_t group_key(const TableShape& shape, std::size_t flat,
                             const std::vector<std::size_t>& idx) {
    std::size_t key = 0;
    for (std::size_t i : idx) {
        key = key * static_cast<std::size_t>(shape.vars()[i].card)
              + static_cast<std::size_t>(shape.digit(flat, i));
    }
    return key;
}

inline std::size_t group_count(const TableShape& shape, const std::vector<std::size_t>& idx) {
    std::size_t n = 1;
    for (std::size_t i : idx) n *= static_cast<std::size_t>(shape.vars()[i].card);
    return n;
}

} // namespace detail

/// Boolean-semiring independence: for every value combination,
/// p(x,y,c) == p(x,c) * p(y,c), evaluated on the slice selected by `given`
/// assignments (if any) and jointly with `given` variables (if any).
inline IndependenceReport check_independence(const PossTable& t,
                                             const std::vector<std::string>& xs,
                                             const std::vector<std::string>& ys,
                                             const Given& given = Given::none()) {
    std::vector<std::string> cvars = given.vars;
    detail::check_disjoint(xs, ys, cvars);

    const auto& shape = t.shape();
    std::optional<Event::Compiled> slice;
    if (!given.assignment.empty()) {
        slice.emplace(Event::assign(given.assignment), shape);
    }

    std::vector<std::size_t> xi, yi, ci;
    for (const auto& n : xs) xi.push_back(shape.index_of(n));
    for (const auto& n : ys) yi.push_back(shape.index_of(n));
    for (const auto& n : cvars) ci.push_back(shape.index_of(n));

    const std::size_t nx = detail::group_count(shape, xi);
    const std::size_t ny = detail::group_count(shape, yi);
    const std::size_t nc = detail::group_count(shape, ci);

    std::vector<std::uint8_t> pxc(nx * nc, 0), pyc(ny * nc, 0), pxyc(nx * ny * nc, 0);
    for (std::size_t f = 0; f < t.size(); ++f) {
        if (!t[f]) continue;
        if (slice && !slice->matches(shape, f)) continue;
        const std::size_t kx = detail::group_key(shape, f, xi);
        const std::size_t ky = detail::group_key(shape, f, yi);
        const std::size_t kc = detail::group_key(shape, f, ci);
        pxc[kx * nc + kc] = 1;
        pyc[ky * nc + kc] = 1;
        pxyc[(kx * ny + ky) * nc + kc] = 1;
    }

    IndependenceReport rep;
    rep.independent = true;
    for (std::size_t kx = 0; kx < nx; ++kx) {
        for (std::size_t ky = 0; ky < ny; ++ky) {
            for (std::size_t kc = 0; kc < nc; ++kc) {
                const int lhs = pxyc[(kx * ny + ky) * nc + kc];
                const int rhs = pxc[kx * nc + kc] & pyc[ky * nc + kc];
                if (lhs != rhs) {
                    rep.independent = false;
                    rep.max_violation = 1.0;
                    return rep;
                }
            }
        }
    }
    return rep;
}

/// Probabilistic conditional independence P(x,y|c) = P(x|c) P(y|c); reports
/// the largest absolute factorization defect over conditioning cells with
/// positive mass.
inline IndependenceReport check_independence(const ProbTable& t,
                                             const std::vector<std::string>& xs,
                                             const std::vector<std::string>& ys,
                                             const Given& given = Given::none(),
                                             double tol = kPhysicalTol) {
    std::vector<std::string> cvars = given.vars;
    detail::check_disjoint(xs, ys, cvars);

    const auto& shape = t.shape();
    std::optional<Event::Compiled> slice;
    if (!given.assignment.empty()) {
        slice.emplace(Event::assign(given.assignment), shape);
    }

    std::vector<std::size_t> xi, yi, ci;
    for (const auto& n : xs) xi.push_back(shape.index_of(n));
    for (const auto& n : ys) yi.push_back(shape.index_of(n));
    for (const auto& n : cvars) ci.push_back(shape.index_of(n));

    const std::size_t nx = detail::group_count(shape, xi);
    const std::size_t ny = detail::group_count(shape, yi);
    const std::size_t nc = detail::group_count(shape, ci);

    std::vector<double> pxc(nx * nc, 0.0), pyc(ny * nc, 0.0), pxyc(nx * ny * nc, 0.0), pc(nc, 0.0);
    for (std::size_t f = 0; f < t.size(); ++f) {
        if (slice && !slice->matches(shape, f)) continue;
        const double v = t[f];
        const std::size_t kx = detail::group_key(shape, f, xi);
        const std::size_t ky = detail::group_key(shape, f, yi);
        const std::size_t kc = detail::group_key(shape, f, ci);
        pxc[kx * nc + kc] += v;
        pyc[ky * nc + kc] += v;
        pxyc[(kx * ny + ky) * nc + kc] += v;
        pc[kc] += v;
    }

    IndependenceReport rep;
    rep.independent = true;
    for (std::size_t kc = 0; kc < nc; ++kc) {
        if (pc[kc] <= 1e-12) continue;
        for (std::size_t kx = 0; kx < nx; ++kx) {
            for (std::size_t ky = 0; ky < ny; ++ky) {
                const double lhs = pxyc[(kx * ny + ky) * nc + kc] / pc[kc];
                const double rhs = (pxc[kx * nc + kc] / pc[kc]) * (pyc[ky * nc + kc] / pc[kc]);
                rep.max_violation = std::max(rep.max_violation, std::abs(lhs - rhs));
            }
        }
    }
    rep.independent = rep.max_violation <= tol;
    return rep;
}

/// True iff no possible cell satisfies antecedent and not consequent.
inline bool check_implication(const PossTable& t, const Event& antecedent,
                              const Event& consequent) {
    const Event::Compiled ante(antecedent, t.shape());
    const Event::Compiled cons(consequent, t.shape());
    for (std::size_t f = 0; f < t.size(); ++f) {
        if (t[f] && ante.matches(t.shape(), f) && !cons.matches(t.shape(), f)) return false;
    }
    return true;
}

/// P(target | given) from joint masses; throws when the conditioning
/// event has no mass.
inline double conditional_event_probability(const ProbTable& t, const Event& target,
                                            const Event& given) {
    const Event::Compiled tg(target, t.shape());
    const Event::Compiled gv(given, t.shape());
    double num = 0.0, den = 0.0;
    for (std::size_t f = 0; f < t.size(); ++f) {
        const double v = t[f];
        if (v == 0.0 || !gv.matches(t.shape(), f)) continue;
        den += v;
        if (tg.matches(t.shape(), f)) num += v;
    }
    if (den <= 1e-12) {
        throw std::invalid_argument("conditional_event_probability: conditioning event has no mass");
    }
    return num / den;
}

struct JointBoundResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// P(A_1)+...+P(A_n) <= P(A_1,...,A_n) + n - 1, evaluated on the table.
inline JointBoundResult joint_lower_bound(const ProbTable& t, const std::vector<Event>& events) {
    if (events.empty()) throw std::invalid_argument("joint_lower_bound: need at least one event");
    std::vector<Event::Compiled> evs;
    evs.reserve(events.size());
    for (const auto& e : events) evs.emplace_back(e, t.shape());

    const double total = t.total_mass();
    std::vector<double> single(events.size(), 0.0);
    double all = 0.0;
    for (std::size_t f = 0; f < t.size(); ++f) {
        const double v = t[f];
        if (v == 0.0) continue;
        bool every = true;
        for (std::size_t k = 0; k < evs.size(); ++k) {
            if (evs[k].matches(t.shape(), f)) {
                single[k] += v;
            } else {
                every = false;
            }
        }
        if (every) all += v;
    }

    JointBoundResult res;
    for (double s : single) res.lhs += s / total;
    res.rhs = all / total + static_cast<double>(events.size()) - 1.0;
    res.holds = res.lhs <= res.rhs + 1e-12;
    return res;
}

} // namespace switchlab
