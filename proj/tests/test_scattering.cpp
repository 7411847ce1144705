#include <cmath>
#include <complex>

#include "bdris/errors.hpp"
#include "bdris/rng.hpp"
#include "bdris/scattering.hpp"
#include "doctest.h"

using namespace bdris;

namespace {

const std::complex<double> kI(0.0, 1.0);

std::vector<RisConfig> combo_grid() {
  return {
      reflective(8, Architecture::SingleConnected),
      reflective(8, Architecture::GroupConnected, 2),
      reflective(8, Architecture::GroupConnected, 4),
      reflective(8, Architecture::FullyConnected),
      reflective(8, Architecture::DynamicGroupConnected, 2),
      reflective(8, Architecture::NonDiagonal),
      hybrid(8, Architecture::SingleConnected),
      hybrid(8, Architecture::GroupConnected, 4),
      hybrid(8, Architecture::FullyConnected),
      hybrid(8, Architecture::DynamicGroupConnected, 4),
      multi_sector(12, 3, Architecture::SingleConnected),
      multi_sector(12, 3, Architecture::GroupConnected, 6),
      multi_sector(12, 3, Architecture::FullyConnected),
      multi_sector(16, 4, Architecture::DynamicGroupConnected, 8),
  };
}

}  // namespace

TEST_SUITE_BEGIN("scattering");

TEST_CASE("identity blocks form a valid fully connected state") {
  ScatteringState s;
  s.config = reflective(4, Architecture::FullyConnected);
  s.blocks = {CMatrix::Identity(4, 4)};
  ValidationReport rep = validate(s, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.max_deviation <= 1e-15);
}

TEST_CASE("equal power split passes the hybrid constraint") {
  // Each cell block (1/sqrt2, 1/sqrt2)^T satisfies |phi_r|^2+|phi_t|^2 = 1.
  ScatteringState s;
  s.config = hybrid(8, Architecture::SingleConnected);
  CMatrix b(2, 1);
  b << M_SQRT1_2, M_SQRT1_2;
  s.blocks.assign(4, b);
  CHECK(validate(s, 1e-12).pass);
}

TEST_CASE("modulus 1.1 entry fails with deviation 0.21") {
  ScatteringState s;
  s.config = reflective(4, Architecture::SingleConnected);
  s.blocks.assign(4, CMatrix::Identity(1, 1));
  s.blocks[2](0, 0) = 1.1 * std::exp(kI * 0.7);
  ValidationReport rep = validate(s, 1e-9);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_deviation == doctest::Approx(0.21).epsilon(1e-12));
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].invariant.find("block 2") != std::string::npos);
}

TEST_CASE("shape mismatches are errors, not violations") {
  ScatteringState s;
  s.config = reflective(4, Architecture::FullyConnected);
  s.blocks = {CMatrix::Identity(4, 3)};
  CHECK_THROWS_AS(validate(s, 1e-9), ShapeError);
  s.blocks = {CMatrix::Identity(4, 4), CMatrix::Identity(4, 4)};
  CHECK_THROWS_AS(validate(s, 1e-9), ShapeError);
}

TEST_CASE("random states are feasible for every combination") {
  Rng rng(2025);
  for (const RisConfig& c : combo_grid()) {
    for (int rep = 0; rep < 5; ++rep) {
      ScatteringState s = random_feasible(c, rng);
      ValidationReport r = validate(s, 1e-9);
      CHECK_MESSAGE(r.pass, to_string(c.mode), " ", to_string(c.architecture),
                    " deviation ", r.max_deviation);
    }
  }
}

TEST_CASE("single connected draws are diagonal with unit modulus") {
  Rng rng(3);
  ScatteringState s =
      random_feasible(reflective(8, Architecture::SingleConnected), rng);
  CMatrix phi = effective_matrices(s)[0];
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      if (r == c)
        CHECK(std::abs(phi(r, c)) == doctest::Approx(1.0).epsilon(1e-12));
      else
        CHECK(phi(r, c) == std::complex<double>(0.0, 0.0));
    }
}

TEST_CASE("hybrid fully connected is a single 8x4 block") {
  Rng rng(4);
  ScatteringState s =
      random_feasible(hybrid(8, Architecture::FullyConnected), rng);
  REQUIRE(s.blocks.size() == 1);
  CHECK(s.blocks[0].rows() == 8);
  CHECK(s.blocks[0].cols() == 4);
}

TEST_CASE("haar moment: E|phi_11|^2 is 1/2 for 2x2 unitaries") {
  Rng rng(5);
  RisConfig c = reflective(2, Architecture::FullyConnected);
  double acc = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    acc += std::norm(random_feasible(c, rng).blocks[0](0, 0));
  CHECK(acc / n == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("projection keeps feasible blocks and is idempotent") {
  Rng rng(6);
  for (const RisConfig& c : combo_grid()) {
    if (c.architecture == Architecture::NonDiagonal) continue;
    ScatteringState s = random_feasible(c, rng);
    ScatteringState p = project(s, s.blocks);
    double dev = 0.0;
    for (size_t g = 0; g < p.blocks.size(); ++g)
      dev = std::max(dev, (p.blocks[g] - s.blocks[g]).cwiseAbs().maxCoeff());
    CHECK(dev <= 1e-12);
  }
}

TEST_CASE("projection strips magnitudes but keeps phases for diagonals") {
  RisConfig c = reflective(3, Architecture::SingleConnected);
  std::vector<CMatrix> raw;
  std::vector<double> phases = {0.3, -1.2, 2.9};
  for (double t : phases) {
    CMatrix b(1, 1);
    b(0, 0) = 2.0 * std::exp(kI * t);
    raw.push_back(b);
  }
  ScatteringState s = project(c, raw);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(s.blocks[i](0, 0)) == doctest::Approx(1.0));
    CHECK(std::arg(s.blocks[i](0, 0)) == doctest::Approx(phases[i]));
  }
}

TEST_CASE("projection beats a million Haar samples at nearness") {
  RisConfig c = hybrid(4, Architecture::FullyConnected);  // one 4x2 block
  Rng rng(7);
  CMatrix raw(4, 2);
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 2; ++col) raw(r, col) = rng.cgauss();

  ScatteringState best = project(c, {raw});
  double d_polar = (raw - best.blocks[0]).norm();

  double d_min = 1e300;
  for (int i = 0; i < 1000000; ++i) {
    ScatteringState s = random_feasible(c, rng);
    double d = (raw - s.blocks[0]).norm();
    if (d < d_min) d_min = d;
  }
  CHECK(d_polar <= d_min + 1e-12);  // polar factor is the true minimizer
  CHECK(d_min - d_polar < 0.5);     // sampling got close, so the bound bites
}

TEST_CASE("rank deficient raw blocks are rejected") {
  RisConfig c = reflective(4, Architecture::FullyConnected);
  CMatrix raw = CMatrix::Zero(4, 4);
  raw(0, 0) = 1.0;  // rank 1
  CHECK_THROWS_AS(project(c, {raw}), RankDeficientError);
}

TEST_CASE("effective matrices: block diagonal assembly") {
  RisConfig c = reflective(4, Architecture::GroupConnected, 2);
  Rng rng(8);
  ScatteringState s = random_feasible(c, rng);
  CMatrix phi = effective_matrices(s)[0];
  CHECK(phi.block(0, 0, 2, 2) == s.blocks[0]);
  CHECK(phi.block(2, 2, 2, 2) == s.blocks[1]);
  CHECK(phi.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(phi.block(2, 0, 2, 2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("effective matrices: hybrid cell blocks split into phi_r, phi_t") {
  RisConfig c = hybrid(8, Architecture::SingleConnected);
  Rng rng(9);
  ScatteringState s = random_feasible(c, rng);
  std::vector<CMatrix> phi = effective_matrices(s);
  REQUIRE(phi.size() == 2);
  for (int i = 0; i < 4; ++i) {
    CHECK(phi[0](i, i) == s.blocks[i](0, 0));
    CHECK(phi[1](i, i) == s.blocks[i](1, 0));
  }
  CHECK((phi[0].adjoint() * phi[0] + phi[1].adjoint() * phi[1] -
         CMatrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
}

TEST_CASE("effective matrices: dynamic grouping {1,3},{2,4}") {
  RisConfig c = reflective(4, Architecture::DynamicGroupConnected, 2);
  Rng rng(10);
  ScatteringState s = random_feasible(c, rng);
  s.cell_permutation = {0, 2, 1, 3};  // groups {1,3} and {2,4}, 1-based
  CMatrix phi = effective_matrices(s)[0];
  auto nz = [&](int r, int col) { return std::abs(phi(r, col)) > 0.0; };
  // 1-based positions (1,1),(1,3),(3,1),(3,3),(2,2),(2,4),(4,2),(4,4)
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col) {
      bool expected = (r % 2 == 0 && col % 2 == 0) ||
                      (r % 2 == 1 && col % 2 == 1);
      CHECK(nz(r, col) == expected);
    }
}

TEST_CASE("stack identity holds for every architecture") {
  Rng rng(11);
  for (const RisConfig& c : combo_grid()) {
    ScatteringState s = random_feasible(c, rng);
    std::vector<CMatrix> phi = effective_matrices(s);
    const int Ms = c.sector_size();
    CMatrix acc = CMatrix::Zero(Ms, Ms);
    for (const CMatrix& p : phi) acc += p.adjoint() * p;
    CHECK((acc - CMatrix::Identity(Ms, Ms)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("non-diagonal state is a phased fixed-point-free permutation") {
  Rng rng(12);
  RisConfig c = reflective(8, Architecture::NonDiagonal);
  ScatteringState s = random_feasible(c, rng);
  CHECK(validate(s, 1e-9).pass);
  CMatrix phi = effective_matrices(s)[0];
  // Unitary, zero diagonal, one unit-modulus entry per row and column.
  CHECK((phi.adjoint() * phi - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() <=
        1e-12);
  for (int i = 0; i < 8; ++i) {
    CHECK(phi(i, i) == std::complex<double>(0.0, 0.0));
    int nz_row = 0, nz_col = 0;
    for (int j = 0; j < 8; ++j) {
      if (std::abs(phi(i, j)) > 0) {
        ++nz_row;
        CHECK(std::abs(phi(i, j)) == doctest::Approx(1.0).epsilon(1e-12));
      }
      if (std::abs(phi(j, i)) > 0) ++nz_col;
    }
    CHECK(nz_row == 1);
    CHECK(nz_col == 1);
  }
  // Random phases make the matrix asymmetric.
  CHECK((phi - phi.transpose()).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("broken pairing is reported") {
  Rng rng(13);
  ScatteringState s =
      random_feasible(reflective(4, Architecture::NonDiagonal), rng);
  s.pairing_sigma = {0, 1, 3, 2};  // fixed points at 0 and 1
  CHECK_FALSE(validate(s, 1e-9).pass);
}

TEST_CASE("quantize snaps to the nearest codebook phase") {
  RisConfig c = reflective(2, Architecture::SingleConnected);
  ScatteringState s;
  s.config = c;
  CMatrix b1(1, 1), b2(1, 1);
  b1(0, 0) = std::exp(kI * 0.1);
  b2(0, 0) = std::exp(kI * 3.0);
  s.blocks = {b1, b2};

  ScatteringState q1 = quantize_phases(s, 1);  // codebook {0, pi}
  CHECK(std::arg(q1.blocks[0](0, 0)) == doctest::Approx(0.0));
  CHECK(std::abs(std::abs(std::arg(q1.blocks[1](0, 0))) - M_PI) < 1e-12);

  // bits=2 codebook {0, pi/2, pi, 3pi/2}: phase 2.0 is nearest to pi/2.
  CMatrix b3(1, 1);
  b3(0, 0) = std::exp(kI * 2.0);
  s.blocks = {b3, b1};
  ScatteringState q2 = quantize_phases(s, 2);
  CHECK(std::arg(q2.blocks[0](0, 0)) == doctest::Approx(M_PI / 2));

  // High resolution leaves phases nearly untouched.
  ScatteringState q16 = quantize_phases(s, 16);
  CHECK(std::abs(std::arg(q16.blocks[0](0, 0)) - 2.0) <= 2 * M_PI / 65536);
  CHECK(validate(q16, 1e-12).pass);
}

TEST_CASE("quantize rejects richer architectures") {
  Rng rng(14);
  ScatteringState s =
      random_feasible(reflective(4, Architecture::FullyConnected), rng);
  CHECK_THROWS_AS(quantize_phases(s, 2), UnsupportedArchitectureError);
  ScatteringState h =
      random_feasible(hybrid(4, Architecture::SingleConnected), rng);
  CHECK_THROWS_AS(quantize_phases(h, 2), UnsupportedArchitectureError);
}

TEST_CASE("dump emits one section per effective matrix") {
  Rng rng(15);
  ScatteringState s =
      random_feasible(hybrid(4, Architecture::SingleConnected), rng);
  std::string text = dump(s);
  CHECK(text.find("# phi 1 (2x2)") != std::string::npos);
  CHECK(text.find("# phi 2 (2x2)") != std::string::npos);
  CHECK(text.find('j') != std::string::npos);
}

TEST_SUITE_END();
