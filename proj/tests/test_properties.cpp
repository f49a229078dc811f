// Randomized invariants across modules: 200 draws from a fixed-seed generator.

#include "twomode/sweeps.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace twomode;

namespace {

constexpr int kCases = 200;
constexpr std::uint32_t kSeed = 20240601;

struct Draw {
    JCParams params;
    double t;
    int n1, n2;
    int M;
};

std::vector<Draw> draws() {
    std::mt19937 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> occ(0, 4), extra(1, 3);
    std::vector<Draw> out;
    for (int i = 0; i < kCases; ++i) {
        const double gamma = 0.2 + 2.0 * u(rng);
        const double delta = u(rng) < 0.3 ? 0.0 : -4.0 + 8.0 * u(rng);
        const int n1 = occ(rng), n2 = occ(rng);
        out.push_back(Draw{JCParams::make(gamma, delta), 15.0 * u(rng), n1, n2, n1 + n2 + extra(rng)});
    }
    return out;
}

const std::vector<Draw>& cases() {
    static const std::vector<Draw> c = draws();
    return c;
}

}  // namespace

TEST(Properties, AmplitudeNormalization) {
    for (const Draw& d : cases())
        for (int n = 0; n <= 12; ++n) {
            const Amplitudes a = amplitudes(n, d.t, d.params);
            ASSERT_NEAR(std::norm(a.c) + std::norm(a.s), 1.0, 1e-12);
        }
}

TEST(Properties, EvolvedStatesStayNormalizedInsideTheirBlock) {
    for (const Draw& d : cases()) {
        const TruncationPolicy pol{d.M, 1e-8};
        for (bool excited : {true, false}) {
            const QubitBosonState psi = excited ? evolve_excited_basis(d.n1, d.n2, d.t, d.params, pol)
                                                : evolve_ground_basis(d.n1, d.n2, d.t, d.params, pol);
            ASSERT_NEAR(psi.norm(), 1.0, 1e-10);
            // Excitation number n+ + n- + [e] is conserved.
            const int K = d.n1 + d.n2 + (excited ? 1 : 0);
            const FockBasis& fb = psi.fock();
            for (Index i = 0; i < fb.dimension(); ++i) {
                if (fb.state(i).total() != K) {
                    ASSERT_EQ(std::abs(psi.sector(false)(i)), 0.0);
                }
                if (fb.state(i).total() + 1 != K) {
                    ASSERT_EQ(std::abs(psi.sector(true)(i)), 0.0);
                }
            }
        }
    }
}

TEST(Properties, BasisChangeInvolution) {
    for (const Draw& d : cases()) {
        const QubitBosonState psi = evolve_excited_basis(d.n1, d.n2, d.t, d.params, TruncationPolicy{d.M, 1e-8});
        const TwoModeDensity rho = reduced_boson_state(psi);
        const TwoModeDensity back = change_basis(change_basis(rho));
        ASSERT_LE((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
        const QubitBosonState twice = change_basis(change_basis(psi));
        ASSERT_LE((twice.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Properties, PartialTransposeInvolutionAndTrace) {
    for (const Draw& d : cases()) {
        const TwoModeDensity rho =
            change_basis(reduced_boson_state(evolve_ground_basis(d.n1, d.n2, d.t, d.params, TruncationPolicy{d.M, 1e-8})));
        const ProductOperator pt = partial_transpose(rho);
        const ProductOperator back = partial_transpose(pt);
        ASSERT_EQ((back.matrix - embed_product(rho).matrix).cwiseAbs().maxCoeff(), 0.0);
        ASSERT_NEAR(pt.matrix.trace().real(), 1.0, 1e-10);
        ASSERT_LE((pt.matrix - pt.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Properties, ProductStatesArePPT) {
    std::mt19937 rng(kSeed + 1);
    std::normal_distribution<double> g;
    for (int k = 0; k < kCases; ++k) {
        // Random single-mode states on levels 0..2 each, so n1 + n2 <= 4.
        Eigen::Vector3cd a, b;
        for (int i = 0; i < 3; ++i) a(i) = cplx(g(rng), g(rng)), b(i) = cplx(g(rng), g(rng));
        a.normalize();
        b.normalize();
        const TruncationPolicy pol{4, 1e-8};
        const FockBasis& fb = *FockBasis::get(4);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(fb.dimension());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) v(fb.index({i, j})) = a(i) * b(j);
        ASSERT_EQ(negativity(TwoModeDensity::projector(pol, BasisTag::Modes12, v)).value, 0.0);
    }
}

TEST(Properties, NegativityBoundsAndBasisInvariance) {
    for (const Draw& d : cases()) {
        const TwoModeDensity rho = reduced_boson_state(evolve_excited_basis(d.n1, d.n2, d.t, d.params, TruncationPolicy{d.M, 1e-8}));
        const double a = negativity(rho).value;
        const double b = negativity(change_basis(change_basis(rho))).value;
        ASSERT_NEAR(a, b, 1e-10);
        ASSERT_GE(a, 0.0);
        const int local = d.n1 + d.n2 + 2;  // populated levels per mode: 0..n1+n2+1
        ASSERT_LE(a, 0.5 * (local - 1) + 1e-12);
    }
}

TEST(Properties, ThermalEnsembleDiagonalAndFastPathAgrees) {
    std::mt19937 rng(kSeed + 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < kCases; ++k) {
        const ThermalSpec spec = ThermalSpec::with_policy(0.6 * u(rng), TruncationPolicy{6, 1e-3});
        try {
            spec.validate();
        } catch (const TruncationError&) {
            continue;
        }
        const JCParams p = JCParams::make(0.3 + u(rng), -2.0 + 4.0 * u(rng));
        const double t = 10.0 * u(rng);
        const Eigen::VectorXd w = evolve_thermal_weights(spec, t, p);
        ASSERT_GE(w.minCoeff(), 0.0);
        const double fast = PlusDiagonalNegativity(6)(w).value;
        const double dense = negativity(evolve_thermal(spec, t, p)).value;
        ASSERT_NEAR(fast, dense, 1e-12);
    }
}

TEST(Properties, DeterministicUnderParallelism) {
    std::mt19937 rng(kSeed + 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> grid;
    for (int k = 0; k < kCases; ++k) grid.push_back(0.05 * k + 0.01 * u(rng));
    const JCParams p = JCParams::make(1.0, 0.7);
    for (const InitialState& init : {InitialState{Vacuum{}}, InitialState{ThermalSpec::make(1.0, 1e-6)}}) {
        const auto a = negativity_timeseries(init, p, grid, 1);
        const auto b = negativity_timeseries(init, p, grid, 4);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            ASSERT_EQ(a[i].t, b[i].t);
            ASSERT_EQ(a[i].negativity, b[i].negativity);
        }
    }
}
