#include <doctest.h>

#include <cmath>

#include "lindfit/gates.hpp"
#include "lindfit/lindblad.hpp"
#include "lindfit/rng.hpp"
#include "lindfit/tomosim.hpp"
#include "oracles.hpp"

using namespace lindfit;

TEST_CASE("pauli fiducials") {
  SUBCASE("one qubit") {
    const FiducialSet fid = pauli_fiducials(1);
    CVec zero(2), one(2), plus(2), plus_i(2);
    zero << 1, 0;
    one << 0, 1;
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    plus_i << 1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0));
    CHECK((fid.prep.col(0) - vectorize(CMat(zero * zero.adjoint()))).norm() < 1e-15);
    CHECK((fid.prep.col(1) - vectorize(CMat(one * one.adjoint()))).norm() < 1e-15);
    CHECK((fid.prep.col(2) - vectorize(CMat(plus * plus.adjoint()))).norm() < 1e-15);
    CHECK((fid.prep.col(3) - vectorize(CMat(plus_i * plus_i.adjoint()))).norm() < 1e-15);
  }
  SUBCASE("two qubits: invertible, full-rank Gram") {
    const FiducialSet fid = pauli_fiducials(2);
    CHECK(fid.meas.rows() == 16);
    Eigen::JacobiSVD<CMat> svd_a(fid.meas);
    Eigen::JacobiSVD<CMat> svd_b(fid.prep);
    CHECK(svd_a.singularValues().minCoeff() > 1e-6);
    CHECK(svd_b.singularValues().minCoeff() > 1e-6);
    const CMat gram = fid.meas * fid.prep;
    Eigen::JacobiSVD<CMat> svd_g(gram);
    CHECK(svd_g.singularValues().minCoeff() > 1e-6);  // rank 16
    // columns are valid density matrices, rows valid effects
    for (int j = 0; j < 16; ++j) {
      const CMat rho = unvectorize(CVec(fid.prep.col(j)));
      CHECK((rho - rho.adjoint()).norm() < 1e-12);
      CHECK(std::abs(rho.trace() - Complex(1, 0)) < 1e-12);
    }
    for (int i = 0; i < 16; ++i) {
      const CMat f = unvectorize(CVec(fid.meas.row(i).adjoint()));
      Eigen::SelfAdjointEigenSolver<CMat> es(((f + f.adjoint()) / 2.0).eval());
      CHECK(es.eigenvalues().minCoeff() > -1e-12);
      CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-12);
    }
  }
}

TEST_CASE("probability simulation") {
  const FiducialSet fid = pauli_fiducials(1);
  SUBCASE("exact identity probabilities") {
    const RMat p = simulate_probabilities(SuperOp::identity(2), fid, kInfiniteShots, 0);
    // F = |0><0| projector is (I+Z)/2 — row index of label "Z" is 3
    CHECK(fid.meas_labels[3] == "Z");
    CHECK(p(3, 0) == doctest::Approx(1.0));  // prep |0>, measure (I+Z)/2
    CHECK(p(3, 1) == doctest::Approx(0.0));
    CHECK(p(0, 2) == doctest::Approx(1.0));  // identity effect reads the trace
  }
  SUBCASE("finite shots: binomial mean within 4 sigma") {
    const int reps = 1000;
    const std::uint64_t shots = 10000;
    const SuperOp e = SuperOp::identity(2);
    const RMat exact = simulate_probabilities(e, fid, kInfiniteShots, 0);
    RMat mean = RMat::Zero(4, 4);
    for (int r = 0; r < reps; ++r) mean += simulate_probabilities(e, fid, shots, 1000 + r);
    mean /= reps;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double p = exact(i, j);
        const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / (shots * double(reps)));
        CHECK(std::abs(mean(i, j) - p) <= 4.0 * sigma + 1e-9);
      }
  }
  SUBCASE("per-entry deviation at 1e4 shots stays below the binomial bound") {
    const Gate g = make_gate("T@I");
    const FiducialSet fid2 = pauli_fiducials(2);
    const RMat exact = simulate_probabilities(ideal_transfer(g), fid2, kInfiniteShots, 0);
    const RMat sampled = simulate_probabilities(ideal_transfer(g), fid2, 10000, 7);
    // crude bound: max deviation over 256 entries within 6 sigma of p(1-p)/n
    double worst = 0;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) worst = std::max(worst, std::abs(sampled(i, j) - exact(i, j)));
    CHECK(worst < 6.0 * 0.005 + 1e-12);
  }
}

TEST_CASE("linear inversion") {
  const FiducialSet fid = pauli_fiducials(2);
  const Gate g = make_gate("CNOT");
  SUBCASE("infinite shots round trip to machine precision") {
    const SuperOp e = ideal_transfer(g);
    const RMat p = simulate_probabilities(e, fid, kInfiniteShots, 0);
    const SuperOp rec = linear_inversion(p, fid);
    CHECK(fro_dist(rec, e) < 1e-12);
  }
  SUBCASE("identity round trip") {
    const RMat p = simulate_probabilities(SuperOp::identity(4), fid, kInfiniteShots, 0);
    CHECK(fro_dist(linear_inversion(p, fid), SuperOp::identity(4)) < 1e-12);
  }
  SUBCASE("sampled inversion is generally not CP") {
    const SuperOp e = ideal_transfer(g);
    const RMat p = simulate_probabilities(e, fid, 10000, 3);
    const SuperOp rec = linear_inversion(p, fid);
    const CMat choi = gamma_involution(rec.mat);
    Eigen::SelfAdjointEigenSolver<CMat> es(((choi + choi.adjoint()) / 2.0).eval(),
                                           Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() < -1e-6);
  }
}

TEST_CASE("CPTP projection") {
  const FiducialSet fid = pauli_fiducials(2);
  const Gate g = make_gate("ISWAP");
  SUBCASE("CPTP input unchanged") {
    const SuperOp e = ideal_transfer(g);
    const SuperOp p = project_to_cptp(e);
    CHECK(fro_dist(p, e) < 1e-8);
  }
  SUBCASE("projected output satisfies both residual bounds and near-optimality") {
    const RMat pm = simulate_probabilities(ideal_transfer(g), fid, 10000, 5);
    const SuperOp raw = linear_inversion(pm, fid);
    const SuperOp proj = project_to_cptp(raw);
    const CMat choi = gamma_involution(proj.mat);
    Eigen::SelfAdjointEigenSolver<CMat> es(((choi + choi.adjoint()) / 2.0).eval(),
                                           Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    const CVec w = omega_vector(4);
    CHECK(((w.adjoint() * proj.mat) - w.adjoint()).norm() < 1e-8);
    // against a long high-precision run
    const SuperOp oracle = testing::dykstra_project_cptp(raw);
    CHECK(fro_dist(proj, raw) <= fro_dist(oracle, raw) + 1e-6);
    // idempotence
    CHECK(fro_dist(project_to_cptp(proj), proj) < 1e-7);
  }
  SUBCASE("TP row restored exactly on random input") {
    const CMat x = testing::random_complex(16, 16, 8, 0.3) + CMat::Identity(16, 16);
    const SuperOp proj = project_to_cptp(SuperOp(x, 4));
    const CVec w = omega_vector(4);
    CHECK(((w.adjoint() * proj.mat) - w.adjoint()).norm() < 1e-8);
  }
}

TEST_CASE("SPAM application") {
  const FiducialSet fid = pauli_fiducials(2);
  SUBCASE("zero strengths leave fiducials unchanged") {
    SpamConfig cfg;
    cfg.prep_mean = cfg.prep_sd = cfg.meas_mean = cfg.meas_sd = 0.0;
    const FiducialSet out = apply_spam(fid, cfg, 3);
    CHECK((out.prep - fid.prep).norm() < 1e-14);
    CHECK((out.meas - fid.meas).norm() < 1e-14);
  }
  SUBCASE("default draws keep columns valid density matrices") {
    const FiducialSet out = apply_spam(fid, SpamConfig{}, 4);
    for (int j = 0; j < 16; ++j) {
      const CMat rho = unvectorize(CVec(out.prep.col(j)));
      CHECK((rho - rho.adjoint()).norm() < 1e-10);
      CHECK(std::abs(rho.trace() - Complex(1, 0)) < 1e-10);
      Eigen::SelfAdjointEigenSolver<CMat> es(((rho + rho.adjoint()) / 2.0).eval(),
                                             Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
    // measurement noise is drawn stronger than preparation noise
    CHECK((out.meas - fid.meas).norm() > (out.prep - fid.prep).norm());
  }
}

TEST_CASE("gateset simulation") {
  const FiducialSet fid = pauli_fiducials(2);
  const std::vector<std::string> labels = {"T@I", "CNOT"};
  std::vector<SuperOp> gates;
  for (const auto& l : labels) gates.push_back(ideal_transfer(make_gate(l)));

  SUBCASE("infinite shots reproduce the exact matrices") {
    const TomographyBundle b = simulate_gateset(gates, fid, labels, kInfiniteShots,
                                                kInfiniteShots, 0);
    CHECK((b.gram - fid.meas * fid.prep).norm() < 1e-12);
    for (size_t i = 0; i < gates.size(); ++i)
      CHECK((b.probs[i].cast<Complex>() - fid.meas * gates[i].mat * fid.prep).norm() < 1e-12);
  }
  SUBCASE("seeded generation is reproducible and the Gram stays invertible") {
    const TomographyBundle b1 = simulate_gateset(gates, fid, labels, 10000, 100000, 9);
    const TomographyBundle b2 = simulate_gateset(gates, fid, labels, 10000, 100000, 9);
    CHECK((b1.gram - b2.gram).norm() == 0.0);
    for (size_t i = 0; i < gates.size(); ++i) CHECK((b1.probs[i] - b2.probs[i]).norm() == 0.0);
    Eigen::JacobiSVD<CMat> svd(b1.gram);
    CHECK(svd.singularValues().maxCoeff() / svd.singularValues().minCoeff() < 1e6);
  }
}

TEST_CASE("non-physical channel raises during sampling") {
  const FiducialSet fid = pauli_fiducials(1);
  // a trace-increasing map pushes probabilities beyond 1
  CMat bad = 1.5 * CMat::Identity(4, 4);
  CHECK_THROWS_AS(simulate_probabilities(SuperOp(bad, 2), fid, 100, 0),
                  NonPhysicalChannelError);
  CHECK_THROWS_AS(simulate_probabilities(SuperOp::identity(2), fid, 0, 0), ParseError);
}
