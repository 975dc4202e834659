#include "spotvol/config_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spotvol::config {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

double bandwidth_field(const json& j, std::size_t n) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return bench::resolve_bandwidth(j.get<std::string>(), n);
  throw std::invalid_argument("h: expected a number or a rule string");
}

DebiasSpec parse_debias(const json& j) {
  if (j.is_null()) return DebiasSpec{};
  const std::string method = j.value("method", "none");
  if (method == "none") return DebiasSpec{};
  if (method == "ratio") return DebiasSpec::ratio_spec(j.value("lambda", 2.0));
  if (method == "iterative") {
    return DebiasSpec::iterative_spec(j.value("lambda", 2.0),
                                      j.value("xi", 1e-6),
                                      j.value("iterations", 1));
  }
  throw std::invalid_argument("debias.method: unknown '" + method + "'");
}

}  // namespace

EstimatorConfig parse_estimator(const std::string& json_text, std::size_t n) {
  const json root = parse_json(json_text);
  const json j = root.contains("estimator") ? root["estimator"] : root;

  const int p_n = j.value("p_n", bench::default_p_n(n));
  const double h = j.contains("h") ? bandwidth_field(j["h"], n)
                                   : bench::resolve_bandwidth("default", n);
  std::optional<double> u;
  if (j.contains("u") && !j["u"].is_string()) u = j["u"].get<double>();
  const int d_n = j.value("d_n", 0);
  const std::string kernel = j.value("kernel", "k1");
  const std::string weight = j.value("weight", "triangle");
  const DebiasSpec debias =
      parse_debias(j.contains("debias") ? j["debias"] : json());
  return EstimatorConfig(p_n, h, u, d_n, KernelSpec::by_name(kernel),
                         WeightFunction::by_name(weight), debias);
}

SimConfig parse_sim(const std::string& json_text) {
  const json root = parse_json(json_text);
  SimConfig cfg;
  if (root.contains("grid")) {
    const json& g = root["grid"];
    cfg.n = g.value("n", cfg.n);
    cfg.horizon = g.value("horizon", cfg.horizon);
  }
  if (root.contains("price")) {
    const json& p = root["price"];
    cfg.x0 = p.value("x0", cfg.x0);
    cfg.drift = p.value("drift", cfg.drift);
  }
  if (root.contains("heston")) {
    const json& h = root["heston"];
    cfg.heston.kappa = h.value("kappa", cfg.heston.kappa);
    cfg.heston.theta_bar = h.value("theta_bar", cfg.heston.theta_bar);
    cfg.heston.vol_of_vol = h.value("vol_of_vol", cfg.heston.vol_of_vol);
    cfg.heston.rho_leverage = h.value("rho_leverage", cfg.heston.rho_leverage);
  }
  if (root.contains("jumps")) {
    const json& j = root["jumps"];
    cfg.jumps.stable_components.clear();
    if (j.contains("stable")) {
      for (const auto& c : j["stable"]) {
        cfg.jumps.stable_components.push_back(
            {c.at("beta").get<double>(), c.at("gamma").get<double>()});
      }
    }
    cfg.jumps.poisson.reset();
    if (j.contains("poisson") && !j["poisson"].is_null()) {
      const json& p = j["poisson"];
      cfg.jumps.poisson =
          PoissonJumps{p.value("intensity", 0.0), p.value("jump_mean", 0.0),
                       p.value("jump_std", 1.0)};
    }
  } else {
    // Reference jump design.
    cfg.jumps.stable_components = {{1.2, 0.15}, {1.0, 0.05}};
    cfg.jumps.poisson = PoissonJumps{3.0, 0.0, 1.0};
  }
  if (root.contains("noise")) {
    const json& nj = root["noise"];
    cfg.noise.sigma_eps = nj.value("sigma_eps", 0.0);
    cfg.noise.d_n = nj.value("d_n", 0);
    cfg.noise.s = nj.value("s", 0.0);
  }
  cfg.validate();
  return cfg;
}

BenchGrid parse_grid(const std::string& json_text) {
  const json root = parse_json(json_text);
  BenchGrid grid;
  grid.reps = root.value("reps", 0L);
  bench::BenchCell base;
  base.n = root.value("n", base.n);

  const auto apply = [](bench::BenchCell& cell, const json& j) {
    cell.tau = j.value("tau", cell.tau);
    cell.kernel = j.value("kernel", cell.kernel);
    if (j.contains("h")) {
      cell.h_rule = j["h"].is_string() ? j["h"].get<std::string>()
                                       : std::to_string(j["h"].get<double>());
    }
    cell.sigma_eps = j.value("sigma_eps", cell.sigma_eps);
    cell.beta1 = j.value("beta1", cell.beta1);
    cell.d_n = j.value("d_n", cell.d_n);
    cell.s = j.value("s", cell.s);
    cell.n = j.value("n", cell.n);
    cell.p_n = j.value("p_n", cell.p_n);
    cell.gamma1 = j.value("gamma1", cell.gamma1);
    cell.beta2 = j.value("beta2", cell.beta2);
    cell.gamma2 = j.value("gamma2", cell.gamma2);
    cell.cp_intensity = j.value("cp_intensity", cell.cp_intensity);
  };

  if (root.contains("defaults")) apply(base, root["defaults"]);
  if (!root.contains("cells") || root["cells"].empty())
    throw std::invalid_argument("grid: needs a nonempty 'cells' array");
  for (const auto& c : root["cells"]) {
    bench::BenchCell cell = base;
    apply(cell, c);
    grid.cells.push_back(cell);
  }
  return grid;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace spotvol::config
