#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "switchlab/instruments.hpp"

using namespace switchlab;

namespace {

Matrix random_unitary_2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const double a = u(rng), b = u(rng), c = u(rng), t = u(rng) / 4.0;
    // U = phase * [cos t, -e^{ib} sin t; e^{ic} sin t, e^{i(b+c)} cos t]
    Matrix m(2, 2);
    m.at(0, 0) = std::polar(std::cos(t), a);
    m.at(0, 1) = -std::polar(std::sin(t), a + b);
    m.at(1, 0) = std::polar(std::sin(t), a + c);
    m.at(1, 1) = std::polar(std::cos(t), a + b + c);
    return m;
}

} // namespace

TEST_CASE("switch operator on identity operations is the identity") {
    const Matrix w = switch_operator(Matrix::identity(2), Matrix::identity(2),
                                     ControlBasis::XBasis);
    REQUIRE(approx_equal(w, Matrix::identity(4)));
    const Matrix wz = switch_operator(Matrix::identity(2), Matrix::identity(2),
                                      ControlBasis::ZBasis);
    REQUIRE(approx_equal(wz, Matrix::identity(4)));
}

TEST_CASE("switch operator of unitaries is unitary") {
    std::mt19937_64 rng(31);
    for (auto basis : {ControlBasis::XBasis, ControlBasis::ZBasis}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix e = random_unitary_2(rng);
            const Matrix f = random_unitary_2(rng);
            const Matrix w = switch_operator(e, f, basis);
            REQUIRE(approx_equal(adjoint(w) * w, Matrix::identity(4)));
        }
    }
    REQUIRE_THROWS_AS(switch_operator(Matrix::identity(2), Matrix::identity(3),
                                      ControlBasis::XBasis),
                      std::invalid_argument);
}

TEST_CASE("switch operator branch structure kills the reversed-order term") {
    // e = |1><0| (first agent sees |0>, reports 0), f = |1><1|: the e-after-f
    // composition annihilates |0>, so W(|psi>|0>) lies entirely in the
    // |+> control branch.
    const Matrix e = states::ket1() * adjoint(states::ket0());
    const Matrix f = states::ket1() * adjoint(states::ket1());
    const Matrix w = switch_operator(e, f, ControlBasis::XBasis);

    REQUIRE(approx_equal(f * e, states::ket1() * adjoint(states::ket0())));
    REQUIRE((e * f).max_abs() < kAlgebraicTol);

    for (const Matrix& psi : {states::ket0(), states::ket1(), states::ket_plus_i()}) {
        const Matrix in = tensor_product(psi, states::ket0());
        const Matrix out = w * in;
        const cplx plus_amp = (adjoint(states::ket_plus()) * psi).at(0, 0);
        const Matrix expect = tensor_product(states::ket_plus(), states::ket1()) * plus_amp;
        REQUIRE(approx_equal(out, expect));
    }
}

TEST_CASE("switch supermap of trivial instruments is the trivial instrument") {
    Instrument trivial;
    trivial.outcomes.push_back({{0}, CPMap({Matrix::identity(2)})});
    const Instrument sw = switch_supermap(trivial, trivial, ControlBasis::XBasis);
    REQUIRE(sw.outcomes.size() == 1);
    REQUIRE(sw.outcomes[0].labels == std::vector<int>{0, 0});
    REQUIRE(approx_equal(sw.outcomes[0].map.choi(),
                         CPMap({Matrix::identity(4)}).choi()));
}

TEST_CASE("switch supermap preserves trace preservation") {
    for (int x1 = 0; x1 < 2; ++x1) {
        for (int x2 = 0; x2 < 2; ++x2) {
            const Instrument sw = switch_supermap(agent_instrument(x1), agent_instrument(x2),
                                                  ControlBasis::XBasis);
            REQUIRE(validate_instrument(sw).ok);
        }
    }
    const Instrument sw11 = switch_supermap(agent_instrument(1), agent_instrument(1),
                                            ControlBasis::ZBasis);
    REQUIRE(sw11.outcomes.size() == 4);
    REQUIRE(validate_instrument(sw11).max_deviation < 1e-12);
}

TEST_CASE("agent instrument behavior") {
    const Instrument idle = agent_instrument(0);
    REQUIRE(idle.outcomes.size() == 1);
    {
        const auto [p, post] = idle.apply(projector(states::ket_plus_i()), 0);
        REQUIRE(p == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(approx_equal(post, projector(states::ket_plus_i())));
    }

    const Instrument measure = agent_instrument(1);
    REQUIRE(measure.outcomes.size() == 2);
    {
        const auto [p0, post0] = measure.apply(projector(states::ket0()), 0);
        REQUIRE(p0 == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(approx_equal(post0, projector(states::ket1())));
        const auto [p1, post1] = measure.apply(projector(states::ket0()), 1);
        REQUIRE(p1 == Catch::Approx(0.0).margin(1e-12));
    }
    {
        const auto probs = measure.probabilities(projector(states::ket_plus()));
        REQUIRE(probs[0] == Catch::Approx(0.5).margin(1e-12));
        REQUIRE(probs[1] == Catch::Approx(0.5).margin(1e-12));
    }
    REQUIRE_THROWS_AS(agent_instrument(2), std::invalid_argument);
}

TEST_CASE("angle measurement") {
    const Instrument z = angle_measurement(0.0);
    REQUIRE(z.probabilities(projector(states::ket0()))[0] == Catch::Approx(1.0).margin(1e-12));

    const Instrument y = y_basis_measurement();
    REQUIRE(y.probabilities(projector(states::ket_plus_i()))[0]
            == Catch::Approx(1.0).margin(1e-12));

    const Instrument diag = angle_measurement(std::numbers::pi / 4.0);
    const double c = std::cos(std::numbers::pi / 8.0);
    REQUIRE(diag.probabilities(projector(states::ket0()))[0]
            == Catch::Approx(c * c).margin(1e-9));

    REQUIRE(validate_instrument(z).ok);
    REQUIRE(validate_instrument(y).ok);
    REQUIRE(validate_instrument(diag).ok);
}

TEST_CASE("validate_instrument flags a dropped outcome") {
    Instrument broken = agent_instrument(1);
    broken.outcomes.pop_back();
    const auto v = validate_instrument(broken);
    REQUIRE_FALSE(v.ok);
    REQUIRE(v.max_deviation == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("joint switch instrument at x=0,0 reduces to the final measurement") {
    const Instrument ymeas = y_basis_measurement();
    const Instrument joint = joint_switch_instrument(0, 0, ymeas, ControlBasis::XBasis);
    REQUIRE(validate_instrument(joint).ok);
    for (const auto& oc : joint.outcomes) {
        REQUIRE(oc.labels.size() == 3);
        REQUIRE(oc.labels[0] == 0);
        REQUIRE(oc.labels[1] == 0);
        const Matrix expect = ymeas.outcomes[static_cast<std::size_t>(oc.labels[2])].map.choi();
        REQUIRE(max_abs_diff(oc.map.choi(), expect) < 1e-12);
    }
}

TEST_CASE("joint switch instrument at x=1,1 marginal simulates an X measurement") {
    const Instrument joint = joint_switch_instrument(1, 1, y_basis_measurement(),
                                                     ControlBasis::XBasis);
    REQUIRE(validate_instrument(joint).ok);
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix u = random_unitary_2(rng);
        Matrix psi(2, 1);
        psi.at(0, 0) = u.at(0, 0);
        psi.at(1, 0) = u.at(1, 0);
        const Matrix rho = psi * adjoint(psi);
        const auto probs = joint.probabilities(rho);
        double m0 = 0.0;
        for (std::size_t i = 0; i < joint.outcomes.size(); ++i) {
            if (joint.outcomes[i].labels[0] == 0) m0 += probs[i];
        }
        const double expect = (projector(states::ket_plus()) * rho).trace().real();
        REQUIRE(m0 == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("Z-controlled joint instrument pins a1 to the control value on |0><0|") {
    const Instrument joint = joint_switch_instrument(1, 1, angle_measurement(0.0),
                                                     ControlBasis::ZBasis);
    const auto probs = joint.probabilities(projector(states::ket0()));
    double a1_zero = 0.0;
    for (std::size_t i = 0; i < joint.outcomes.size(); ++i) {
        if (joint.outcomes[i].labels[0] == 0) a1_zero += probs[i];
    }
    REQUIRE(a1_zero == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("joint switch instrument accepts mixed target states") {
    const Matrix mixed = cplx{0.25, 0.0} * projector(states::ket0())
                         + cplx{0.75, 0.0} * projector(states::ket_plus());
    const Instrument joint = joint_switch_instrument(1, 0, y_basis_measurement(),
                                                     ControlBasis::XBasis, mixed);
    REQUIRE(validate_instrument(joint).ok);

    REQUIRE_THROWS_AS(joint_switch_instrument(1, 0, y_basis_measurement(),
                                              ControlBasis::XBasis, Matrix::identity(2)),
                      std::invalid_argument);
}

TEST_CASE("instrument probabilities are a distribution on any density operator") {
    std::mt19937_64 rng(41);
    for (int x1 = 0; x1 < 2; ++x1) {
        for (int x2 = 0; x2 < 2; ++x2) {
            const Instrument joint = joint_switch_instrument(x1, x2, y_basis_measurement(),
                                                             ControlBasis::XBasis);
            for (int trial = 0; trial < 5; ++trial) {
                const Matrix u = random_unitary_2(rng);
                Matrix psi(2, 1);
                psi.at(0, 0) = u.at(0, 0);
                psi.at(1, 0) = u.at(1, 0);
                const auto probs = joint.probabilities(psi * adjoint(psi));
                double total = 0.0;
                for (double p : probs) {
                    REQUIRE(p > -1e-12);
                    REQUIRE(p < 1.0 + 1e-12);
                    total += p;
                }
                REQUIRE(total == Catch::Approx(1.0).margin(1e-9));
            }
        }
    }
}
