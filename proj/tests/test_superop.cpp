#include <doctest.h>

#include <cmath>

#include "lindfit/gates.hpp"
#include "lindfit/superop.hpp"
#include "oracles.hpp"

using namespace lindfit;

namespace {
CMat proj(const CVec& v) { return v * v.adjoint(); }
}  // namespace

TEST_CASE("vectorize basis examples") {
  CVec zero(2), plus(2);
  zero << 1, 0;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);

  CVec v = vectorize(proj(zero));
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(0, 0));
  CHECK(v(2) == Complex(0, 0));
  CHECK(v(3) == Complex(0, 0));

  v = vectorize(CMat(CMat::Identity(2, 2) / 2.0));
  CHECK(v(0).real() == doctest::Approx(0.5));
  CHECK(v(3).real() == doctest::Approx(0.5));

  v = vectorize(proj(plus));
  for (int i = 0; i < 4; ++i) CHECK(v(i).real() == doctest::Approx(0.5).epsilon(1e-12));

  // exact inverse
  const CMat r = testing::random_complex(4, 4, 11);
  CHECK((unvectorize(vectorize(r)) - r).norm() == 0.0);
}

TEST_CASE("transfer_from_map_pairs acts as the map") {
  const CMat eye = CMat::Identity(2, 2);
  SUBCASE("identity pair") {
    const SuperOp e = transfer_from_map_pairs({{eye, eye}});
    CHECK((e.mat - CMat::Identity(4, 4)).norm() == 0.0);
  }
  SUBCASE("unitary conjugation X") {
    const Gate x = make_gate("X");
    const SuperOp e = transfer_from_unitary(x.unitary);
    CMat xx = kron(x.unitary, x.unitary);  // X real so X ⊗ X̄ = X ⊗ X
    CHECK((e.mat - xx).norm() < 1e-14);
    // brute-force action check on all basis matrices
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m) {
        CMat basis = CMat::Zero(2, 2);
        basis(l, m) = 1.0;
        const CVec lhs = e.mat * vectorize(basis);
        const CVec rhs = vectorize(CMat(x.unitary * basis * x.unitary.adjoint()));
        CHECK((lhs - rhs).norm() < 1e-14);
      }
  }
  SUBCASE("H gate transfer matrix is real symmetric") {
    const Gate h = make_gate("H");
    const SuperOp e = transfer_from_unitary(h.unitary);
    CHECK(e.mat.imag().norm() < 1e-14);
    CHECK((e.mat - e.mat.transpose()).norm() < 1e-14);
    for (int trial = 0; trial < 4; ++trial) {
      CMat rho = testing::random_complex(2, 2, 100 + trial);
      const CVec lhs = e.mat * vectorize(rho);
      const CVec rhs = vectorize(CMat(h.unitary * rho * h.unitary.adjoint()));
      CHECK((lhs - rhs).norm() < 1e-13);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(transfer_from_map_pairs({}), DimensionError);
    CHECK_THROWS_AS(transfer_from_map_pairs({{eye, CMat::Identity(4, 4)}}), DimensionError);
  }
}

TEST_CASE("channel action property on random pairs") {
  for (int trial = 0; trial < 8; ++trial) {
    const CMat a = testing::random_complex(4, 4, 200 + trial);
    const CMat b = testing::random_complex(4, 4, 300 + trial);
    const SuperOp e = transfer_from_map_pairs({{a, b}});
    const CMat rho = testing::random_complex(4, 4, 400 + trial);
    CHECK((e.mat * vectorize(rho) - vectorize(CMat(a * rho * b))).norm() < 1e-12);
  }
}

TEST_CASE("gamma involution") {
  SUBCASE("basis rule") {
    const int d = 2;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          for (int m = 0; m < d; ++m) {
            CMat unit = CMat::Zero(d * d, d * d);
            unit(j * d + k, l * d + m) = 1.0;
            const CMat g = gamma_involution(unit);
            CMat expect = CMat::Zero(d * d, d * d);
            expect(j * d + l, k * d + m) = 1.0;
            CHECK((g - expect).norm() == 0.0);
          }
  }
  SUBCASE("involution and linearity, exact") {
    const CMat m = testing::random_complex(16, 16, 7);
    const CMat n = testing::random_complex(16, 16, 8);
    CHECK((gamma_involution(gamma_involution(m)) - m).norm() == 0.0);
    const Complex alpha(0.25, -0.5), beta(2.0, 1.0);
    const CMat lhs = gamma_involution(CMat(alpha * m + beta * n));
    const CMat rhs = alpha * gamma_involution(m) + beta * gamma_involution(n);
    CHECK((lhs - rhs).norm() < 1e-14);
  }
  SUBCASE("Hamiltonian generator has Hermitian Choi") {
    CMat h = testing::random_complex(2, 2, 9);
    h = ((h + h.adjoint()) / 2.0).eval();
    const CMat eye = CMat::Identity(2, 2);
    const CMat l = Complex(0, -1) * (kron(h, eye) - kron(eye, h.transpose()));
    const CMat c = gamma_involution(l);
    CHECK((c - c.adjoint()).norm() < 1e-14);
  }
}

TEST_CASE("eig_pairs") {
  SUBCASE("diagonal spectrum") {
    CVec mu(4);
    mu << 1.0, std::exp(Complex(0, 0.4)), std::exp(Complex(0, -0.4)), 1.0;
    const CMat m = CMat(mu.asDiagonal());
    const EigenSystem sys = eig_pairs(m);
    CHECK((sys.reconstruct() - m).norm() < 1e-12);
    CHECK(sys.condition_estimate == doctest::Approx(1.0));
  }
  SUBCASE("CNOT transfer matrix has -1 with multiplicity 6") {
    const SuperOp e = ideal_transfer(make_gate("CNOT"));
    const EigenSystem sys = eig_pairs(e.mat);
    int count = 0;
    for (int j = 0; j < 16; ++j)
      if (std::abs(sys.eigenvalues(j) - Complex(-1, 0)) < 1e-9) ++count;
    CHECK(count == 6);
  }
  SUBCASE("biorthogonality and reconstruction on random matrices") {
    for (int trial = 0; trial < 6; ++trial) {
      const CMat m = testing::random_complex(16, 16, 500 + trial);
      const EigenSystem sys = eig_pairs(m);
      CHECK((sys.left * sys.right - CMat::Identity(16, 16)).norm() < 1e-10);
      CHECK((sys.reconstruct() - m).norm() < 1e-10);
    }
  }
  SUBCASE("defective matrix raises") {
    CMat jordan(4, 4);
    jordan.setZero();
    for (int i = 0; i < 4; ++i) jordan(i, i) = 1.0;
    jordan(0, 1) = 1.0;  // Jordan block
    CHECK_THROWS_AS(eig_pairs(jordan), DefectiveMatrixError);
  }
}

TEST_CASE("principal log") {
  CHECK(principal_log(Complex(1, 0)) == Complex(0, 0));
  CHECK(principal_log(Complex(-1, 0)).imag() == doctest::Approx(kPi));
  CHECK(principal_log(Complex(-1, -0.0)).imag() == doctest::Approx(kPi));
  const Complex mu = std::exp(Complex(-0.01, 0.3));
  const Complex lambda = principal_log(mu);
  CHECK(lambda.real() == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(lambda.imag() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(principal_log(Complex(0, 0)), SolverFailure);

  // |Im| ≤ π always
  for (int trial = 0; trial < 50; ++trial) {
    const CMat r = testing::random_complex(1, 1, 600 + trial, 2.0);
    if (std::abs(r(0, 0)) < 1e-6) continue;
    CHECK(std::abs(principal_log(r(0, 0)).imag()) <= kPi + 1e-15);
  }
}

TEST_CASE("expm and eig roundtrip") {
  for (int trial = 0; trial < 4; ++trial) {
    const CMat m = testing::random_complex(16, 16, 700 + trial, 0.4);
    const EigenSystem sys = eig_pairs(m);
    CVec logs(16);
    // rebuild from Σ λ_j |r⟩⟩⟨⟨l| with λ = log μ, then exponentiate
    for (int j = 0; j < 16; ++j) logs(j) = std::log(sys.eigenvalues(j));
    const CMat a = sys.right * logs.asDiagonal() * sys.left;
    CHECK((expm(a) - m).norm() < 1e-8);
  }
}

TEST_CASE("average gate fidelity") {
  const SuperOp cnot = ideal_transfer(make_gate("CNOT"));
  CHECK(avg_gate_fidelity(cnot, cnot) == doctest::Approx(1.0));

  // fully depolarizing channel: ρ ↦ I/d
  const int d = 4;
  CMat dep = CMat::Zero(16, 16);
  const CVec id_vec = vectorize(CMat(CMat::Identity(4, 4) / 4.0));
  const CVec w = omega_vector(d);
  dep = id_vec * (std::sqrt(static_cast<double>(d)) * w).adjoint();
  // TP check: ⟨⟨ω|dep = ⟨⟨ω|
  CHECK(((w.adjoint() * dep) - w.adjoint()).norm() < 1e-14);
  const SuperOp identity_op = SuperOp::identity(d);
  CHECK(avg_gate_fidelity(identity_op, SuperOp(dep, 4)) == doctest::Approx(0.25));
}

TEST_CASE("omega vector pattern") {
  const CVec w = omega_vector(4);
  CHECK(w.norm() == doctest::Approx(1.0));
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      if (j == k)
        CHECK(w(j * 4 + k).real() == doctest::Approx(0.5));
      else
        CHECK(std::abs(w(j * 4 + k)) == 0.0);
    }
}
