#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "spotvol/csv.hpp"
#include "spotvol/estimator.hpp"
#include "spotvol/resample.hpp"

using namespace spotvol;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("spotvol_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

constexpr std::int64_t kSecond = 1000000000LL;

}  // namespace

TEST_CASE("observation CSV round trip is bit-exact") {
  TempDir dir;
  std::mt19937 gen(3);
  std::normal_distribution<double> z(5.0, 1.0);
  std::vector<double> values(501);
  for (auto& v : values) v = z(gen);
  const ObservationSeries obs(values, 1.0);
  const auto file = dir.file("obs.csv");
  csv::write_observations(obs, file);
  const ObservationSeries back = csv::read_observations(file);
  CHECK(back.horizon() == obs.horizon());
  REQUIRE(back.values().size() == obs.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(back[i] == obs[i]);
  }
}

TEST_CASE("path CSV feeds the estimator through the noisy column") {
  TempDir dir;
  SimConfig cfg = SimConfig::reference_design(1.5, 0.01, 0, 0.0, 2000);
  cfg.seed = 12;
  const SimPath path = simulate_full(cfg);
  const auto file = dir.file("path.csv");
  csv::write_path(path, cfg.horizon, file);
  const ObservationSeries obs = csv::read_observations(file);
  REQUIRE(obs.values().size() == path.noisy.size());
  for (std::size_t i = 0; i < path.noisy.size(); ++i) {
    CHECK(obs[i] == path.noisy[i]);
  }
}

TEST_CASE("tick CSV validation carries line numbers") {
  TempDir dir;
  const auto file = dir.file("ticks.csv");
  {
    std::ofstream out(file);
    out << "timestamp_ns,price\n100,10.5\n200,-3\n";
  }
  CHECK_THROWS_WITH_AS(csv::read_ticks(file), doctest::Contains(":3"),
                       DataError);
  {
    std::ofstream out(file);
    out << "timestamp_ns,price\n200,10.5\n100,10.6\n";
  }
  CHECK_THROWS_WITH_AS(csv::read_ticks(file),
                       doctest::Contains("nondecreasing"), DataError);
}

TEST_CASE("previous-tick resampling carries the last price forward") {
  std::vector<csv::TickRecord> ticks;
  // Boundary-aligned ticks on a 10-interval session.
  for (int i = 0; i <= 10; ++i) {
    ticks.push_back({i * kSecond, 100.0 + i});
  }
  const std::vector<SessionWindow> session = {{0, 10 * kSecond}};
  const auto obs = previous_tick_resample(ticks, kSecond, session);
  REQUIRE(obs.values().size() == 11);
  for (int i = 0; i <= 10; ++i) {
    CHECK(obs[i] == doctest::Approx(std::log(100.0 + i)).epsilon(1e-15));
  }

  // Remove interior ticks: the gap carries the last price forward.
  std::vector<csv::TickRecord> sparse = {{0, 100.0}, {5 * kSecond + 1, 200.0}};
  const auto carried = previous_tick_resample(sparse, kSecond, session);
  for (int i = 0; i <= 5; ++i) CHECK(carried[i] == doctest::Approx(std::log(100.0)));
  for (int i = 6; i <= 10; ++i) CHECK(carried[i] == doctest::Approx(std::log(200.0)));
}

TEST_CASE("previous-tick resampling matches a brute-force scan") {
  std::mt19937 gen(9);
  std::exponential_distribution<double> gap(2.0);  // ~2 ticks per second
  std::uniform_real_distribution<double> px(90.0, 110.0);
  std::vector<csv::TickRecord> ticks;
  double t = -1.0;  // one tick before the session opens
  while (t < 61.0) {
    ticks.push_back({static_cast<std::int64_t>(t * kSecond), px(gen)});
    t += gap(gen);
  }
  const std::vector<SessionWindow> session = {{0, 60 * kSecond}};
  const auto obs =
      previous_tick_resample(ticks, kSecond, session, /*log=*/false);
  REQUIRE(obs.values().size() == 61);
  for (int b = 0; b <= 60; ++b) {
    double last = std::nan("");
    for (const auto& tk : ticks) {
      if (tk.timestamp_ns <= b * kSecond) last = tk.price;
    }
    CHECK(obs[b] == last);
  }
}

TEST_CASE("resampling without an opening price fails") {
  const std::vector<csv::TickRecord> ticks = {{5 * kSecond, 100.0}};
  const std::vector<SessionWindow> session = {{0, 10 * kSecond}};
  CHECK_THROWS_WITH_AS(previous_tick_resample(ticks, kSecond, session),
                       doctest::Contains("opening"), DataError);
}

TEST_CASE("resampled grid length depends only on sessions and interval") {
  const std::vector<SessionWindow> sessions = {
      {0, 20 * kSecond}, {100 * kSecond, 130 * kSecond}};
  for (unsigned density : {1u, 7u}) {
    std::mt19937 gen(density);
    std::uniform_real_distribution<double> px(90.0, 110.0);
    std::vector<csv::TickRecord> ticks;
    for (int i = -2; i < 140 * static_cast<int>(density); ++i) {
      ticks.push_back(
          {static_cast<std::int64_t>(i) * kSecond / density, px(gen)});
    }
    const auto obs = previous_tick_resample(ticks, kSecond, sessions);
    // 20 + 30 intervals, plus the single opening boundary.
    CHECK(obs.values().size() == 51);
  }
}

TEST_CASE("weekly curve delegates to the spot estimator") {
  SimConfig cfg = SimConfig::reference_design(1.5, 0.01, 0, 0.0, 20000);
  cfg.seed = 21;
  const SimPath path = simulate_full(cfg);
  const ObservationSeries obs(path.noisy, 1.0);

  const EstimatorConfig config(50, 0.05, std::nullopt, 0,
                               KernelSpec::by_name("onesided"),
                               WeightFunction::triangle());
  CurveRequest request{{0.5}, config, false};
  const auto curve = weekly_curve(obs, request);
  REQUIRE(curve.size() == 1);
  CHECK(curve[0].first == 0.5);
  const auto direct = spot_vol(obs, 0.5, config);
  CHECK(curve[0].second.sigma2_hat == direct.sigma2_hat);
  CHECK(curve[0].second.u_used == direct.u_used);
}

TEST_CASE("weekly curve default window holds 36 pre-averaged points") {
  const std::size_t n = 117000;
  const auto config = weekly_curve_default_config(n);
  const double pd = 114.0 / static_cast<double>(n);
  CHECK(static_cast<long>(std::floor(config.h() / pd)) == 36);
  CHECK(config.kernel().name() == "onesided");
  CHECK(config.d_n() == 10);
}

TEST_CASE("weekly curve emits monotone taus and applies the log option") {
  SimConfig cfg = SimConfig::reference_design(1.5, 0.0, 0, 0.0, 10000);
  cfg.seed = 33;
  const SimPath path = simulate_full(cfg);
  // Convert to strictly positive "prices".
  std::vector<double> prices(path.noisy.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    prices[i] = std::exp(path.noisy[i] - 4.0);
  }
  const ObservationSeries raw(prices, 1.0);
  const EstimatorConfig config(30, 0.08, std::nullopt, 0,
                               KernelSpec::by_name("k1"),
                               WeightFunction::triangle());
  CurveRequest request{{0.25, 0.5, 0.75}, config, true};
  const auto curve = weekly_curve(raw, request);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].first < curve[1].first);
  CHECK(curve[1].first < curve[2].first);
  for (const auto& [tau, est] : curve) {
    CHECK(std::isfinite(est.sigma2_hat));
  }
}
