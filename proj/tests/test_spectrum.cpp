#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "schmidt_forge/spectrum.hpp"
#include "support/expect_error.hpp"
#include "support/reference.hpp"

using namespace schmidt_forge;

TEST(MakeSpectrum, AcceptsNormalizedInput) {
  const auto s = make_spectrum({0.5, 0.5});
  EXPECT_EQ(s.dim(), 2u);
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
}

TEST(MakeSpectrum, NormalizesOnRequest) {
  const auto s = make_spectrum({1, 1, 1, 1}, InputKind::squared, true);
  for (double v : s.sq_coeffs()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(MakeSpectrum, AmplitudesAreSquared) {
  const auto s = make_spectrum({std::sqrt(0.7), std::sqrt(0.3)}, InputKind::amplitudes);
  EXPECT_NEAR(s[0], 0.7, 1e-15);
  EXPECT_NEAR(s[1], 0.3, 1e-15);
}

TEST(MakeSpectrum, RejectsBadInput) {
  EXPECT_SF_ERROR(make_spectrum({0.4, 0.3, 0.2, 0.2}), ErrorKind::NotNormalized);
  EXPECT_SF_ERROR(make_spectrum(std::vector<double>{}), ErrorKind::EmptyInput);
  EXPECT_SF_ERROR(make_spectrum({1.0}), ErrorKind::DimensionTooSmall);
  EXPECT_SF_ERROR(make_spectrum({1.2, -0.2}), ErrorKind::NegativeEntry);
  EXPECT_SF_ERROR(make_spectrum({NAN, 1.0}), ErrorKind::NegativeEntry);
  EXPECT_SF_ERROR(make_spectrum({0.0, 0.0}, InputKind::squared, true), ErrorKind::NotNormalized);
}

TEST(MakeSpectrum, StoredSumWithinTolerance) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    auto v = ref::random_simplex(2 + t % 30, rng);
    for (double& x : v) x *= 1.0 + 5e-10;
    const auto s = make_spectrum(v);
    double sum = 0.0;
    for (double x : s.sq_coeffs()) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, kStoredNormTol);
  }
}

TEST(Measures, UniformIsMaximallyEntangled) {
  const auto m = measures(make_spectrum({0.25, 0.25, 0.25, 0.25}));
  EXPECT_DOUBLE_EQ(m.purity, 0.25);
  EXPECT_DOUBLE_EQ(m.schmidt_number, 4.0);
  EXPECT_NEAR(m.concurrence, 1.0, 1e-15);
}

TEST(Measures, ProductStateIsUnentangled) {
  const auto m = measures(make_spectrum({1, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(m.purity, 1.0);
  EXPECT_DOUBLE_EQ(m.schmidt_number, 1.0);
  EXPECT_DOUBLE_EQ(m.concurrence, 0.0);
}

TEST(Measures, FourLevelExample) {
  const auto m = measures(make_spectrum({0.4, 0.3, 0.2, 0.1}));
  EXPECT_NEAR(m.purity, 0.30, 1e-15);
  EXPECT_NEAR(m.schmidt_number, 10.0 / 3.0, 1e-14);
  EXPECT_NEAR(m.concurrence_sq, 14.0 / 15.0, 1e-15);
}

TEST(Measures, BoundsHoldOnRandomSpectra) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 2 + t % 40;
    const auto m = measures(make_spectrum(ref::random_simplex(d, rng)));
    EXPECT_GE(m.purity, 1.0 / d - 1e-15);
    EXPECT_LE(m.purity, 1.0);
    EXPECT_GE(m.schmidt_number, 1.0);
    EXPECT_LE(m.schmidt_number, d * (1 + 1e-14));
    EXPECT_GE(m.concurrence, 0.0);
    EXPECT_LE(m.concurrence, 1.0);
    EXPECT_NEAR(m.concurrence * m.concurrence, m.concurrence_sq, 1e-14);
  }
}

TEST(SortDescending, ReportsZeroBasedPermutation) {
  const auto r = sort_descending(make_spectrum({0.1, 0.4, 0.2, 0.3}));
  EXPECT_EQ(std::vector<double>(r.spectrum.sq_coeffs().begin(), r.spectrum.sq_coeffs().end()),
            (std::vector<double>{0.4, 0.3, 0.2, 0.1}));
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{1, 3, 2, 0}));
}

TEST(SortDescending, SortedAndTiedInputKeepIdentity) {
  const std::vector<std::size_t> id{0, 1, 2, 3};
  EXPECT_EQ(sort_descending(make_spectrum({0.4, 0.3, 0.2, 0.1})).permutation, id);
  EXPECT_EQ(sort_descending(make_spectrum({0.25, 0.25, 0.25, 0.25})).permutation, id);
}

TEST(SortDescending, UnsortRestoresInput) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto s = make_spectrum(ref::random_simplex(2 + t % 20, rng));
    const auto r = sort_descending(s);
    for (std::size_t k = 1; k < r.spectrum.dim(); ++k) EXPECT_GE(r.spectrum[k - 1], r.spectrum[k]);
    const auto back = unsort(r.spectrum.sq_coeffs(), r.permutation);
    for (std::size_t m = 0; m < s.dim(); ++m) EXPECT_EQ(back[m], s[m]);
  }
}

TEST(Error, MessageCarriesKindName) {
  try {
    make_spectrum({0.4, 0.3, 0.2, 0.2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "NotNormalized");
    EXPECT_EQ(std::string(e.what()).rfind("NotNormalized", 0), 0u);
  }
}
