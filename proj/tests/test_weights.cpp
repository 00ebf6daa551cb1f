#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "eigentrilat/weights.hpp"
#include "oracles.hpp"

using namespace eigentrilat;

TEST_CASE("toa weights follow 1 / (4 sigma^2 d^2)") {
  // d = 2, sigma = 1: 1 / (4 * 1 * 4) = 1/16.
  const WeightMatrix w = weights_toa(Vec{{2.0}}, Vec{{1.0}});
  CHECK(w.diagonal());
  CHECK(w.diag()[0] == doctest::Approx(0.0625).epsilon(1e-15));

  const WeightMatrix w2 = weights_toa(Vec{{1.0, 2.0}}, Vec{{0.5, 1.0}});
  CHECK(w2.diag()[0] == doctest::Approx(1.0));
  CHECK(w2.diag()[1] == doctest::Approx(0.0625));
}

TEST_CASE("toa weights reject bad inputs") {
  CHECK_THROWS_AS(weights_toa(Vec{{1.0}}, Vec{{0.0}}), Error);
  CHECK_THROWS_AS(weights_toa(Vec{{0.0}}, Vec{{1.0}}), Error);
  CHECK_THROWS_AS(weights_toa(Vec{{1.0, 1.0}}, Vec{{1.0}}), Error);
  CHECK_THROWS_AS(weights_toa(Vec{{-1.0}}, Vec{{1.0}}), Error);
}

TEST_CASE("rss reading to squared distance") {
  // C = c0 - 10 eta log10(d): 20 dB below c0 at eta = 2 is d^2 = 100.
  CHECK(rss_to_distance_squared(-60.0, -40.0, 2.0) ==
        doctest::Approx(100.0).epsilon(1e-12));
  CHECK(rss_to_distance_squared(-40.0, -40.0, 2.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // 10 dB below at eta = 1 is d^2 = 100 as well.
  CHECK(rss_to_distance_squared(-50.0, -40.0, 1.0) ==
        doctest::Approx(100.0).epsilon(1e-12));
  CHECK_THROWS_AS(rss_to_distance_squared(-50.0, -40.0, 0.0), Error);
  CHECK_THROWS_AS(rss_to_distance_squared(NAN, -40.0, 2.0), Error);
}

TEST_CASE("rss weights follow (5 eta / (sigma d^2 ln 10))^2") {
  // d^2 = 10, eta = 2, sigma = 5: (10 / (50 ln 10))^2.
  const WeightMatrix w = weights_rss(Vec{{10.0}}, Vec{{2.0}}, 5.0);
  CHECK(w.diag()[0] ==
        doctest::Approx(0.0075444678804645572).epsilon(1e-14));
  // d^2 = 1, eta = 2, sigma = 5: (2 / ln 10)^2.
  const WeightMatrix w1 = weights_rss(Vec{{1.0}}, Vec{{2.0}}, 5.0);
  CHECK(w1.diag()[0] ==
        doctest::Approx(0.75444678804645549).epsilon(1e-14));
  CHECK_THROWS_AS(weights_rss(Vec{{1.0}}, Vec{{2.0}}, 0.0), Error);
  CHECK_THROWS_AS(weights_rss(Vec{{0.0}}, Vec{{2.0}}, 5.0), Error);
}

TEST_CASE("general weight assembly keeps the storage class") {
  const WeightMatrix diag =
      build_weight_matrix(Vec{{2.0, 3.0}}, WeightMatrix::Unit(2));
  CHECK(diag.diagonal());
  CHECK(diag.diag()[0] == 4.0);
  CHECK(diag.diag()[1] == 9.0);

  const WeightMatrix full = build_weight_matrix(
      Vec{{2.0, 3.0}}, WeightMatrix::Full(Mat{{1.0, 0.5}, {0.5, 1.0}}));
  CHECK_FALSE(full.diagonal());
  CHECK(full.full()(0, 0) == 4.0);
  CHECK(full.full()(0, 1) == 3.0);  // 2 * 0.5 * 3
  CHECK(full.full()(1, 0) == 3.0);
  CHECK(full.full()(1, 1) == 9.0);
}

TEST_CASE("negative transform slopes are fine, zero is not") {
  // RSS-style transforms have negative slope in distance; only the square
  // enters the weights.
  const WeightMatrix w =
      build_weight_matrix(Vec{{-2.0}}, WeightMatrix::Unit(1));
  CHECK(w.diag()[0] == 4.0);
  CHECK_THROWS_AS(build_weight_matrix(Vec{{0.0}}, WeightMatrix::Unit(1)),
                  Error);
  CHECK_THROWS_AS(
      build_weight_matrix(Vec{{1.0, 2.0}}, WeightMatrix::Unit(3)), Error);
}

TEST_CASE("weights_for_model dispatches per model") {
  const Vec d{{2.0, 2.0}};

  const WeightMatrix unit = weights_for_model(UnitNoise{}, d);
  CHECK(unit.diag()[0] == 1.0);

  const WeightMatrix toa =
      weights_for_model(GaussianDistanceNoise{Vec{{1.0, 1.0}}}, d);
  CHECK(toa.diag()[0] == doctest::Approx(0.0625));

  // d = 2 means d^2 = 4; eta 2, sigma 5: (10 / (20 ln 10))^2.
  const WeightMatrix rss = weights_for_model(
      LogNormalRssNoise{Vec{{2.0, 2.0}}, Vec{{-40.0, -40.0}}, 5.0}, d);
  const double a = 10.0 / (20.0 * std::log(10.0));
  CHECK(rss.diag()[0] == doctest::Approx(a * a).epsilon(1e-14));

  const WeightMatrix custom =
      weights_for_model(CustomPsiNoise{Vec{{-3.0, 0.5}}}, d);
  CHECK(custom.diag()[0] == 9.0);
  CHECK(custom.diag()[1] == 0.25);
}

namespace {

TrilaterationProblem line_problem() {
  TrilaterationProblem p;
  p.dim = 1;
  p.senders = Mat{{0.0, 3.0}};
  p.distances = Vec{{1.0, 2.0}};
  p.weights = WeightMatrix::Unit(2);
  return p;
}

}  // namespace

TEST_CASE("eval_h0 exact values for the unit model") {
  // Unit model: residuals are |x - s|^2 - d^2 directly. At x = 1 the
  // senders at 0 and 3 give residuals 0 and 0.
  const TrilaterationProblem p = line_problem();
  const Mat P = Mat::Identity(2, 2);
  CHECK(eval_h0(Vec{{1.0}}, p, UnitNoise{}, P) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // At x = 0: residuals -1 and 5; h0 = 1 + 25 = 26.
  CHECK(eval_h0(Vec{{0.0}}, p, UnitNoise{}, P) == doctest::Approx(26.0));
}

TEST_CASE("eval_h0 for the gaussian model uses plain distances") {
  // Psi = sqrt: residuals |x - s| - d. At x = 0: 0 - 1 = -1 and 3 - 2 = 1;
  // h0 = 2.
  const TrilaterationProblem p = line_problem();
  const Mat P = Mat::Identity(2, 2);
  CHECK(eval_h0(Vec{{0.0}}, p, GaussianDistanceNoise{Vec{{1.0, 1.0}}}, P) ==
        doctest::Approx(2.0));
}

TEST_CASE("eval_h0 taylor expansion matches the weighted cost locally") {
  // Near the true position, 4 h(x) approximates h0(x): linearizing the
  // transforms in the residuals turns h0 into the weighted quartic, up to
  // the conventional quarter factor. The ratio tends to one along any
  // approach direction once the weights follow the model.
  TrilaterationProblem p;
  p.dim = 2;
  p.senders = Mat{{1.0, -1.0, 0.0}, {0.0, 0.5, 1.5}};
  const Vec truth{{0.25, 0.4}};
  Vec d(3);
  for (int j = 0; j < 3; ++j) d[j] = (truth - p.senders.col(j)).norm();
  p.distances = d;
  const NoiseModel model = GaussianDistanceNoise{Vec{{1.0, 1.0, 1.0}}};
  p.weights = weights_for_model(model, d);
  const Mat P = Mat::Identity(3, 3);

  const Vec dir = Vec{{0.6, -0.8}};
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    const Vec x = truth + eps * dir;
    const double exact = eval_h0(x, p, model, P);
    const double taylor = oracles::direct_cost(x, p);
    CHECK(std::abs(4.0 * taylor / exact - 1.0) < 50.0 * eps);
  }
}

TEST_CASE("eval_h0 refuses derivative-only transforms") {
  const TrilaterationProblem p = line_problem();
  try {
    eval_h0(Vec{{0.0}}, p, CustomPsiNoise{Vec{{1.0, 1.0}}},
            Mat::Identity(2, 2));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}
