#include "spotvol/csv.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spotvol::csv {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return in;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& path, long line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError(path + ":" + std::to_string(line) +
                    ": cannot parse number '" + s + "'");
  }
  return v;
}

std::int64_t parse_int64(const std::string& s, const std::string& path,
                         long line) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError(path + ":" + std::to_string(line) +
                    ": cannot parse integer '" + s + "'");
  }
  return v;
}

}  // namespace

void write_observations(const ObservationSeries& obs, const std::string& path) {
  auto out = open_out(path);
  out << "time,value\n";
  const double dt = obs.delta();
  for (std::size_t i = 0; i < obs.values().size(); ++i) {
    out << fmt(static_cast<double>(i) * dt) << ',' << fmt(obs[i]) << '\n';
  }
  if (!out) throw DataError("write failed on '" + path + "'");
}

ObservationSeries read_observations(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  ++line_no;
  const auto header = split_line(line);
  int value_col;
  if (header.size() == 2 && header[0] == "time" && header[1] == "value") {
    value_col = 1;
  } else if (header.size() == 4 && header[0] == "time" &&
             header[2] == "noisy") {
    value_col = 2;  // path CSV: estimate from the noisy column
  } else {
    throw DataError(path + ":1: expected header 'time,value' or "
                           "'time,clean,noisy,spot_var'");
  }
  std::vector<double> times, values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(header.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    times.push_back(parse_double(fields[0], path, line_no));
    values.push_back(parse_double(fields[value_col], path, line_no));
  }
  if (times.size() < 3) throw DataError(path + ": need at least 3 rows");
  const std::size_t n = times.size() - 1;
  const double horizon = times.back();
  if (!(horizon > 0.0)) throw DataError(path + ": last time must be positive");
  const double dt = horizon / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    if (std::abs(times[i] - static_cast<double>(i) * dt) >
        1e-6 * std::max(1.0, horizon)) {
      throw DataError(path + ":" + std::to_string(i + 2) +
                      ": time grid is not equidistant");
    }
  }
  return ObservationSeries(std::move(values), horizon);
}

void write_path(const SimPath& sim, double horizon, const std::string& path) {
  auto out = open_out(path);
  out << "time,clean,noisy,spot_var\n";
  const std::size_t n = sim.noisy.size() - 1;
  const double dt = horizon / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    out << fmt(static_cast<double>(i) * dt) << ',' << fmt(sim.clean[i]) << ','
        << fmt(sim.noisy[i]) << ',' << fmt(sim.spot_var[i]) << '\n';
  }
  if (!out) throw DataError("write failed on '" + path + "'");
}

std::vector<TickRecord> read_ticks(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  ++line_no;
  const auto header = split_line(line);
  if (header.size() != 2 || header[0] != "timestamp_ns" ||
      header[1] != "price") {
    throw DataError(path + ":1: expected header 'timestamp_ns,price'");
  }
  std::vector<TickRecord> ticks;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != 2) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 2 fields");
    }
    TickRecord t;
    t.timestamp_ns = parse_int64(fields[0], path, line_no);
    t.price = parse_double(fields[1], path, line_no);
    if (!(t.price > 0.0)) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": price must be positive");
    }
    if (!ticks.empty() && t.timestamp_ns < ticks.back().timestamp_ns) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": timestamps must be nondecreasing");
    }
    ticks.push_back(t);
  }
  if (ticks.empty()) throw DataError(path + ": no tick records");
  return ticks;
}

void write_reports(const std::vector<bench::MonteCarloReport>& reports,
                   const std::string& path) {
  auto out = open_out(path);
  out << "tau,kernel,h,sigma_eps,beta1,d_n,s,n,p_n,rb_mean,sd,mse,"
         "cov90,cov95,cov99,reps,seed,runtime_s\n";
  for (const auto& r : reports) {
    const auto& c = r.cell;
    const int p_n = c.p_n > 0 ? c.p_n : bench::default_p_n(c.n);
    out << fmt(c.tau) << ',' << c.kernel << ','
        << fmt(bench::resolve_bandwidth(c.h_rule, c.n)) << ','
        << fmt(c.sigma_eps) << ',' << fmt(c.beta1) << ',' << c.d_n << ','
        << fmt(c.s) << ',' << c.n << ',' << p_n << ',' << fmt(r.rb_mean) << ','
        << fmt(r.sd) << ',' << fmt(r.mse) << ',' << fmt(r.cov90) << ','
        << fmt(r.cov95) << ',' << fmt(r.cov99) << ',' << r.reps << ','
        << r.seed << ',' << fmt(r.runtime_seconds) << '\n';
  }
  if (!out) throw DataError("write failed on '" + path + "'");
}

void write_compare(const std::vector<CompareRow>& rows,
                   const std::string& path) {
  auto out = open_out(path);
  out << "beta1,h,estimator,rb_mean,sd,mse,reps,seed\n";
  for (const auto& r : rows) {
    out << fmt(r.beta1) << ',' << r.h_rule << ',' << r.estimator << ','
        << fmt(r.rb_mean) << ',' << fmt(r.sd) << ',' << fmt(r.mse) << ','
        << r.reps << ',' << r.seed << '\n';
  }
  if (!out) throw DataError("write failed on '" + path + "'");
}

void write_studentized(const std::vector<double>& samples,
                       const std::string& path) {
  auto out = open_out(path);
  out << "rep,sta2\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << i << ',' << fmt(samples[i]) << '\n';
  }
  if (!out) throw DataError("write failed on '" + path + "'");
}

void write_curve(const std::vector<std::pair<double, SpotVolEstimate>>& curve,
                 const std::string& path) {
  auto out = open_out(path);
  out << "tau,sigma2_hat,noise_correction,u_used,clamped\n";
  for (const auto& [tau, est] : curve) {
    out << fmt(tau) << ',' << fmt(est.sigma2_hat) << ','
        << fmt(est.noise_correction) << ',' << fmt(est.u_used) << ','
        << (est.clamped ? 1 : 0) << '\n';
  }
  if (!out) throw DataError("write failed on '" + path + "'");
}

}  // namespace spotvol::csv
