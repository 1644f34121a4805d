// Completely positive maps, instruments (outcome-indexed CP maps summing to a
// trace-preserving map), the two-operation quantum switch, and the concrete
// agent interventions used by the scenarios. Destructive measurements are
// CP maps to a one-dimensional output (1xN Kraus operators), so outcome
// probabilities are traces against effect operators.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "switchlab/matrix.hpp"

namespace switchlab {

struct CPMap {
    std::vector<Matrix> kraus;
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;

    CPMap() = default;

    explicit CPMap(std::vector<Matrix> ks) : kraus(std::move(ks)) {
        if (kraus.empty()) throw std::invalid_argument("CPMap: need at least one Kraus operator");
        in_dim = kraus.front().cols();
        out_dim = kraus.front().rows();
        for (const auto& k : kraus) {
            if (k.cols() != in_dim || k.rows() != out_dim) {
                throw std::invalid_argument("CPMap: Kraus operators disagree on dimensions");
            }
        }
    }

    /// Sum_k K^dag K; outcome probability on rho is Tr(rho * effect).
    Matrix effect() const {
        Matrix e = Matrix::zero(in_dim, in_dim);
        for (const auto& k : kraus) e += adjoint(k) * k;
        return e;
    }

    /// Sum_k K rho K^dag (unnormalized post-measurement operator).
    Matrix apply(const Matrix& rho) const {
        Matrix out = Matrix::zero(out_dim, out_dim);
        for (const auto& k : kraus) out += k * rho * adjoint(k);
        return out;
    }

    /// Choi operator Sum_ij Phi(|i><j|) (x) |i><j|; equal Choi means equal map.
    Matrix choi() const {
        Matrix c = Matrix::zero(out_dim * in_dim, out_dim * in_dim);
        for (const auto& k : kraus) {
            for (std::size_t i = 0; i < in_dim; ++i) {
                Matrix ei(in_dim, 1);
                ei.at(i, 0) = 1.0;
                Matrix col = k * ei; // out_dim x 1
                for (std::size_t j = 0; j < in_dim; ++j) {
                    Matrix ej(in_dim, 1);
                    ej.at(j, 0) = 1.0;
                    Matrix row = adjoint(k * ej); // 1 x out_dim
                    c += tensor_product(col * row, ei * adjoint(ej));
                }
            }
        }
        return c;
    }
};

/// One classical outcome of an instrument: a label tuple plus its CP map.
struct InstrumentOutcome {
    std::vector<int> labels;
    CPMap map;
};

struct Instrument {
    std::vector<InstrumentOutcome> outcomes;

    std::size_t in_dim() const {
        if (outcomes.empty()) throw std::logic_error("Instrument: no outcomes");
        return outcomes.front().map.in_dim;
    }

    /// Probability of each outcome on rho, in outcome order.
    std::vector<double> probabilities(const Matrix& rho) const {
        std::vector<double> p;
        p.reserve(outcomes.size());
        for (const auto& oc : outcomes) {
            p.push_back((oc.map.effect() * rho).trace().real());
        }
        return p;
    }

    /// (probability, normalized post state) for one outcome; the post state is
    /// meaningful only for non-destructive outcomes with nonzero probability.
    std::pair<double, Matrix> apply(const Matrix& rho, std::size_t outcome_index) const {
        const auto& oc = outcomes.at(outcome_index);
        Matrix post = oc.map.apply(rho);
        const double p = post.trace().real();
        if (p > 0) post *= cplx{1.0 / p, 0.0};
        return {p, post};
    }
};

struct InstrumentValidation {
    double max_deviation = 0.0;
    bool ok = false;
};

/// Reports the largest entrywise deviation of Sum_outcomes Sum_k K^dag K from
/// the identity (trace preservation of the total map).
inline InstrumentValidation validate_instrument(const Instrument& inst,
                                                double tol = kAlgebraicTol) {
    Matrix total = Matrix::zero(inst.in_dim(), inst.in_dim());
    for (const auto& oc : inst.outcomes) total += oc.map.effect();
    InstrumentValidation v;
    v.max_deviation = max_abs_diff(total, Matrix::identity(inst.in_dim()));
    v.ok = v.max_deviation <= tol;
    return v;
}

enum class ControlBasis { XBasis, ZBasis };

/// The switch operator on control (x) target for one Kraus pair:
/// X-controlled: |+><+| (x) FE + |-><-| (x) EF;
/// Z-controlled: |0><0| (x) FE + |1><1| (x) EF.
inline Matrix switch_operator(const Matrix& e, const Matrix& f, ControlBasis basis) {
    if (!e.is_square() || !f.is_square() || e.rows() != f.rows()) {
        throw std::invalid_argument("switch_operator: e and f must be square with equal dimension");
    }
    Matrix p0(2, 2), p1(2, 2);
    if (basis == ControlBasis::XBasis) {
        p0 = projector(states::ket_plus());
        p1 = projector(states::ket_minus());
    } else {
        p0 = projector(states::ket0());
        p1 = projector(states::ket1());
    }
    return tensor_product(p0, f * e) + tensor_product(p1, e * f);
}

/// The quantum switch as a supermap on instruments: outcome tuples are the
/// concatenated input tuples, Kraus sets are all switch_operator pairs.
inline Instrument switch_supermap(const Instrument& e_inst, const Instrument& f_inst,
                                  ControlBasis basis) {
    if (e_inst.in_dim() != f_inst.in_dim()) {
        throw std::invalid_argument("switch_supermap: instruments act on different target dimensions");
    }
    Instrument out;
    for (const auto& eo : e_inst.outcomes) {
        for (const auto& fo : f_inst.outcomes) {
            InstrumentOutcome oc;
            oc.labels = eo.labels;
            oc.labels.insert(oc.labels.end(), fo.labels.begin(), fo.labels.end());
            std::vector<Matrix> ks;
            for (const auto& ek : eo.map.kraus) {
                for (const auto& fk : fo.map.kraus) {
                    ks.push_back(switch_operator(ek, fk, basis));
                }
            }
            oc.map = CPMap(std::move(ks));
            out.outcomes.push_back(std::move(oc));
        }
    }
    return out;
}

/// Intervention of one agent inside the switch. x=0: no intervention,
/// single outcome 0 carrying the identity channel. x=1: computational-basis
/// measurement with repreparation in |1>, Kraus |1><a|.
inline Instrument agent_instrument(int x) {
    if (x != 0 && x != 1) throw std::invalid_argument("agent_instrument: x must be 0 or 1");
    Instrument inst;
    if (x == 0) {
        inst.outcomes.push_back({{0}, CPMap({Matrix::identity(2)})});
        return inst;
    }
    inst.outcomes.push_back({{0}, CPMap({states::ket1() * adjoint(states::ket0())})});
    inst.outcomes.push_back({{1}, CPMap({states::ket1() * adjoint(states::ket1())})});
    return inst;
}

/// Destructive two-outcome qubit measurement along cos(phi) Z + sin(phi) X;
/// outcome 0 corresponds to the +1 eigenvector.
inline Instrument angle_measurement(double phi) {
    Instrument inst;
    inst.outcomes.push_back({{0}, CPMap({adjoint(states::bloch_zx(phi))})});
    inst.outcomes.push_back({{1}, CPMap({adjoint(states::bloch_zx_orth(phi))})});
    return inst;
}

/// Destructive Y-basis measurement; outcome 0 corresponds to |+i>.
inline Instrument y_basis_measurement() {
    Instrument inst;
    inst.outcomes.push_back({{0}, CPMap({adjoint(states::ket_plus_i())})});
    inst.outcomes.push_back({{1}, CPMap({adjoint(states::ket_minus_i())})});
    return inst;
}

namespace detail {

/// Eigendecomposition of a 2x2 Hermitian PSD matrix as an ensemble of
/// (weight, unit ket) pairs, dropping zero-weight branches.
inline std::vector<std::pair<double, Matrix>> qubit_ensemble(const Matrix& rho) {
    if (rho.rows() != 2 || rho.cols() != 2) {
        throw std::invalid_argument("qubit_ensemble: expected a 2x2 matrix");
    }
    const double a = rho.at(0, 0).real();
    const double d = rho.at(1, 1).real();
    const cplx b = rho.at(0, 1);
    const double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) / 4.0 + std::norm(b)));
    const double mean = (a + d) / 2.0;
    const double l0 = mean + disc;
    const double l1 = mean - disc;

    std::vector<std::pair<double, Matrix>> out;
    auto push_vec = [&](double lam) {
        if (lam <= kAlgebraicTol) return;
        Matrix v(2, 1);
        if (std::abs(b) > kAlgebraicTol) {
            v.at(0, 0) = b;
            v.at(1, 0) = lam - a;
        } else if (std::abs(lam - a) <= std::abs(lam - d)) {
            v.at(0, 0) = 1.0;
        } else {
            v.at(1, 0) = 1.0;
        }
        double n2 = std::norm(v.at(0, 0)) + std::norm(v.at(1, 0));
        v *= cplx{1.0 / std::sqrt(n2), 0.0};
        out.emplace_back(lam, v);
    };
    push_vec(l0);
    if (disc > kAlgebraicTol) push_vec(l1);
    return out;
}

} // namespace detail

/// The full intervention pattern of one switch wing as a destructive
/// instrument on the input control qubit, with outcome labels (a1, a2, a3):
/// the target is prepared in target_init, the two agent instruments run
/// inside the switch, the output control is measured by final_meas, and the
/// output target is traced out.
inline Instrument joint_switch_instrument(int x1, int x2, const Instrument& final_meas,
                                          ControlBasis basis,
                                          const Matrix& target_init) {
    if (!is_density_operator(target_init, 1e-10) || target_init.rows() != 2) {
        throw std::invalid_argument("joint_switch_instrument: target_init must be a qubit density operator");
    }
    const Instrument sw = switch_supermap(agent_instrument(x1), agent_instrument(x2), basis);
    const auto ensemble = detail::qubit_ensemble(target_init);

    // Bras <t| on the output target implement the partial trace.
    const std::vector<Matrix> target_bras = {adjoint(states::ket0()), adjoint(states::ket1())};
    const Matrix id_c = Matrix::identity(2);

    Instrument out;
    for (const auto& so : sw.outcomes) {
        for (const auto& mo : final_meas.outcomes) {
            InstrumentOutcome oc;
            oc.labels = so.labels;
            oc.labels.insert(oc.labels.end(), mo.labels.begin(), mo.labels.end());
            std::vector<Matrix> ks;
            for (const auto& w : so.map.kraus) {
                for (const auto& m : mo.map.kraus) {
                    for (const auto& [weight, tket] : ensemble) {
                        const Matrix inject = tensor_product(id_c, tket) * cplx{std::sqrt(weight), 0.0};
                        for (const auto& bra : target_bras) {
                            ks.push_back(tensor_product(m, bra) * w * inject);
                        }
                    }
                }
            }
            oc.map = CPMap(std::move(ks));
            out.outcomes.push_back(std::move(oc));
        }
    }
    return out;
}

inline Instrument joint_switch_instrument(int x1, int x2, const Instrument& final_meas,
                                          ControlBasis basis) {
    return joint_switch_instrument(x1, x2, final_meas, basis, projector(states::ket0()));
}

} // namespace switchlab
