/*
 * Copyright 2026 The altsha Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// altsha: command-line driver for the model experiments.
//
// Exit status: 0 success, 1 a verification failed, 2 usage, configuration,
// size-cap or runtime error (partial outputs are removed).

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "altsha/calibration.hpp"
#include "altsha/group_measures.hpp"
#include "altsha/groups.hpp"
#include "altsha/matrix_counting.hpp"
#include "altsha/model_sampler.hpp"
#include "altsha/report.hpp"
#include "config.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using namespace altsha;
using altsha::cli::Config;
using nlohmann::ordered_json;

namespace {

constexpr const char* kCsvSchema = "altsha-csv/1";
constexpr int kExitVerify = 1;
constexpr int kExitError = 2;

// Files written by one run; removed again if the run fails.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    if (!fs::exists(dir_)) {
      fs::create_directories(dir_);
      created_dir_ = true;
    }
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".partial");
    {
      std::ofstream out(tmp, std::ios::binary);
      out << content;
      out.flush();
      if (!out) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot write " + target.string());
      }
    }
    fs::rename(tmp, target);
    written_.push_back(target);
    names_.push_back(name);
  }

  void rollback() {
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
    if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
    written_.clear();
    names_.clear();
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  std::vector<std::string> names_;
  bool created_dir_ = false;
};

std::string csv(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  CsvWriter w(out);
  for (const auto& r : rows) w.row(r);
  return out.str();
}

std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(std::int64_t v) { return std::to_string(v); }
std::string str(unsigned v) { return std::to_string(v); }

ModelConfig model_config(const Config& cfg) {
  ModelConfig m;
  m.schedule = parse_eta_schedule(cfg.raw("model.eta_schedule"));
  m.fixed_eta = cfg.f64("model.fixed_eta");
  m.x_min = cfg.i64("model.x_min");
  m.calibration_exponent = cfg.f64("model.calibration_exponent");
  m.seed = cfg.u64("seed");
  m.samples_per_point = cfg.u64("samples");
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Commands. Each fills `out` and returns an exit status.

int cmd_simulate(const Config& cfg, Outputs& out) {
  const ModelConfig mc = model_config(cfg);
  const SurveyResult s = rank_survey(cfg.heights("survey.h_grid"), mc.samples_per_point, mc);
  std::vector<std::vector<std::string>> rows{{"h_lo", "h_hi", "r", "samples", "hits", "p_hat", "stderr"}};
  for (const auto& r : s.records)
    rows.push_back({r.h_lo.get_str(), r.h_hi.get_str(), str(r.r), str(r.samples), str(r.hits), format_double(r.p_hat),
                    format_double(r.std_error)});
  out.write("survey.csv", csv(rows));

  std::vector<std::vector<std::string>> fits{{"r", "slope", "intercept", "r2", "target", "target_slope"}};
  for (const auto& [r, f] : s.fits) {
    const std::string target = r == 1 ? "0" : "-" + str(r - 1) + "/24";
    const double target_slope = r == 1 ? 0.0 : -static_cast<double>(r - 1) / 24.0;
    fits.push_back({str(r), format_double(f.slope), format_double(f.intercept), format_double(f.r2), target,
                    format_double(target_slope)});
  }
  out.write("survey_fit.csv", csv(fits));
  for (const auto& [r, f] : s.fits)
    std::cout << "Prob(rk' >= " << r << "): slope " << format_double(f.slope, 4) << " (target "
              << (r == 1 ? "0" : "-" + str(r - 1) + "/24") << ")\n";
  return 0;
}

// Comparison of an empirical distribution with a measure on the listed
// support plus the observed labels.
template <class Measure>
ordered_json compare_distribution(const EmpiricalDistribution& dist, std::vector<std::string> support,
                                  Measure&& measure) {
  std::set<std::string> seen(support.begin(), support.end());
  for (const auto& [label, c] : dist.counts)
    if (seen.insert(label).second) support.push_back(label);
  ordered_json groups = ordered_json::array();
  double listed_measure = 0, listed_empirical = 0, l1 = 0;
  for (const auto& label : support) {
    const MeasureValue m = measure(label);
    const double f = dist.frequency(label);
    listed_measure += m.value;
    listed_empirical += f;
    l1 += std::abs(f - m.value);
    groups.push_back({{"label", label}, {"count", dist.count(label)}, {"empirical", f}, {"model", m.value}});
  }
  const double tail_measure = std::max(0.0, 1.0 - listed_measure);
  const double tail_empirical = std::max(0.0, 1.0 - listed_empirical);
  ordered_json j;
  j["groups"] = groups;
  j["model_mass_listed"] = listed_measure;
  j["model_mass_tail"] = tail_measure;
  j["tail_note"] = "model mass outside the listed groups is 1 - model_mass_listed";
  j["tv_distance"] = 0.5 * (l1 + std::abs(tail_empirical - tail_measure));
  return j;
}

int cmd_sha_dist(const Config& cfg, Outputs& out) {
  const auto n = static_cast<unsigned>(cfg.u64("sha.n"));
  const auto r = static_cast<unsigned>(cfg.u64("sha.r"));
  const std::uint64_t p = cfg.u64("sha.p");
  const std::int64_t x = cfg.i64("sha.x");
  const ShaDistributionResult res = empirical_sha_distribution(n, x, r, p, cfg.u64("samples"), cfg.u64("seed"));
  std::vector<std::string> support;
  for (const auto& g : symplectic_groups_up_to(p, static_cast<unsigned>(cfg.u64("sha.max_log_order"))))
    support.push_back(g.label());
  ordered_json j{{"n", n}, {"x", x}, {"r", r}, {"p", p}, {"samples", res.distribution.total}, {"draws", res.draws},
                 {"model", "delaunay"}};
  j.update(compare_distribution(res.distribution, support, [&](const std::string& label) {
    return delaunay_measure(SymplecticPGroup::from_underlying(parse_group_label(label)), r);
  }));
  out.write("sha_dist.json", j.dump(2) + "\n");
  std::cout << "TV distance to D_" << r << "," << p << ": " << format_double(j["tv_distance"].get<double>(), 4) << "\n";
  return 0;
}

int cmd_cl_dist(const Config& cfg, Outputs& out) {
  const auto n = static_cast<unsigned>(cfg.u64("cl.n"));
  const std::uint64_t p = cfg.u64("cl.p");
  const auto k = static_cast<unsigned>(cfg.u64("cl.k"));
  const ClDistributionResult res = empirical_cl_distribution(n, p, k, cfg.u64("samples"), cfg.u64("seed"));
  std::vector<std::string> support;
  for (const auto& g : abelian_groups_up_to(p, static_cast<unsigned>(cfg.u64("cl.max_log_order"))))
    support.push_back(g.label());
  ordered_json j{{"n", n}, {"p", p}, {"k", k}, {"samples", res.distribution.total}, {"refined", res.refined},
                 {"model", "cohen-lenstra"}};
  j.update(compare_distribution(res.distribution, support,
                                [](const std::string& label) { return cl_measure(parse_group_label(label)); }));
  out.write("cl_dist.json", j.dump(2) + "\n");
  std::cout << "TV distance to Cohen-Lenstra: " << format_double(j["tv_distance"].get<double>(), 4) << "\n";
  return 0;
}

ordered_json fit_json(const std::optional<PowerFit>& f) {
  if (!f) return nullptr;
  return {{"slope", f->slope}, {"intercept", f->intercept}, {"r2", f->r2}};
}

int cmd_count(const Config& cfg, Outputs& out) {
  const auto n = static_cast<unsigned>(cfg.u64("count.n"));
  const auto r = static_cast<unsigned>(cfg.u64("count.r"));
  const Norm norm = parse_norm(cfg.raw("count.norm"));
  const CountingFit fit = fit_counting_exponent(n, r, cfg.bounds("count.bounds"), norm, cfg.u64("count.min_count"),
                                                cfg.u64("count.cap"));
  std::vector<std::vector<std::string>> rows{{"n", "r", "bound", "norm", "count", "total", "used"}};
  for (const auto& p : fit.points)
    rows.push_back({str(n), str(r), str(p.bound), to_string(norm), str(p.count), str(p.total), p.used ? "1" : "0"});
  out.write("counts.csv", csv(rows));
  ordered_json j{{"n", n},
                 {"r", r},
                 {"norm", to_string(norm)},
                 {"counted", norm == Norm::box ? "corank >= r" : "rank == r"},
                 {"abscissa", norm == Norm::box ? "2X+1" : "T"},
                 {"target", fit.target},
                 {"fit", fit_json(fit.fit)},
                 {"skipped", fit.skipped}};
  if (norm == Norm::box) {
    j["fraction_target"] = fit.fraction_target;
    j["fraction_fit"] = fit_json(fit.fraction_fit);
    j["fit_vs_bound"] = fit_json(fit.fit_vs_bound);
    j["fraction_fit_vs_bound"] = fit_json(fit.fraction_fit_vs_bound);
  }
  out.write("count_fit.json", j.dump(2) + "\n");
  std::cout << "slope " << format_double(fit.fit.slope, 4) << " (target " << format_double(fit.target) << ")\n";
  if (fit.fraction_fit)
    std::cout << "fraction slope " << format_double(fit.fraction_fit->slope, 4) << " (target "
              << format_double(fit.fraction_target) << ")\n";
  return 0;
}

int cmd_verify(const Config& cfg, Outputs& out, const std::string& suite) {
  const verify::Report rep = verify::run_suite(suite, cfg.u64("seed"));
  std::cout << rep.to_text();
  out.write("verify_" + suite + ".json", rep.to_json().dump(2) + "\n");
  return rep.passed() ? 0 : kExitVerify;
}

int cmd_period_scan(const Config& cfg, Outputs& out) {
  const double lo = cfg.heights("period.h_lo").at(0).get_d();
  const double hi = cfg.heights("period.h_hi").at(0).get_d();
  const PeriodScan s = period_bound_scan(lo, hi, cfg.u64("samples"), cfg.u64("seed"), cfg.f64("period.tol"));
  std::vector<std::vector<std::string>> rows{{"A", "B", "H", "Delta", "Omega", "Omega_H112"}};
  for (const auto& p : s.samples)
    rows.push_back({p.curve.a.get_str(), p.curve.b.get_str(), p.height.get_str(), p.disc.get_str(),
                    format_double(p.omega), format_double(p.normalized)});
  out.write("period_scan.csv", csv(rows));
  const auto stats = [](const SummaryStats& st) {
    return ordered_json{{"min", st.min}, {"max", st.max}, {"quantiles_5_25_50_75_95", st.quantiles}};
  };
  ordered_json j{{"samples", s.samples.size()},
                 {"omega_h112", stats(s.normalized)},
                 {"omega_h112_over_log_h", stats(s.normalized_log)},
                 {"empirical_C", s.normalized_log.max}};
  out.write("period_summary.json", j.dump(2) + "\n");
  std::cout << "Omega H^{1/12} in [" << format_double(s.normalized.min, 4) << ", " << format_double(s.normalized.max, 4)
            << "], C = " << format_double(s.normalized_log.max, 4) << "\n";
  return 0;
}

int cmd_predicted_table(const Config& cfg, Outputs& out) {
  std::vector<double> hs;
  const auto heights = cfg.heights("table.h");
  for (const auto& h : heights) hs.push_back(h.get_d());
  const auto table = predicted_table(hs);
  std::vector<std::vector<std::string>> rows{{"H", "rank0", "rank1", "rank_ge2", "rank_ge3"}};
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& t = table[i];
    rows.push_back({heights[i].get_str(), format_double(t.rank0, 4), format_double(t.rank1, 4),
                    format_double(t.rank_ge2, 4), format_double(t.rank_ge3, 4)});
  }
  const std::string text = csv(rows);
  out.write("predicted_table.csv", text);
  std::cout << text;
  return 0;
}

struct Command {
  std::string name;
  std::string help;
  std::string topic;
  /// Dedicated flag -> config key.
  std::vector<std::pair<std::string, std::string>> flags;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list{
      {"simulate", "rank survey over a height grid", "rank-exponent", {{"--h-grid", "survey.h_grid"}}},
      {"sha-dist",
       "p-part of the cokernel torsion vs the Delaunay measure",
       "sha-distribution",
       {{"--n", "sha.n"}, {"--x", "sha.x"}, {"--r", "sha.r"}, {"--p", "sha.p"}}},
      {"cl-dist",
       "cokernels of p-adic matrices vs Cohen-Lenstra",
       "cohen-lenstra",
       {{"--n", "cl.n"}, {"--p", "cl.p"}, {"--k", "cl.k"}}},
      {"count",
       "exact counts of alternating matrices by rank, with exponent fit",
       "counting-exponent",
       {{"--n", "count.n"},
        {"--r", "count.r"},
        {"--norm", "count.norm"},
        {"--bounds", "count.bounds"},
        {"--min-count", "count.min_count"},
        {"--cap", "count.cap"}}},
      {"verify", "exact identity suites: lattice, snf, table, period", "identities", {}},
      {"period-scan",
       "normalized real periods over a height range",
       "period-bounds",
       {{"--h-lo", "period.h_lo"}, {"--h-hi", "period.h_hi"}, {"--tol", "period.tol"}}},
      {"predicted-table", "model prediction percentages by height", "prediction-table", {{"--heights", "table.h"}}},
      {"print-config", "print the effective configuration", "config", {}},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"altsha: random alternating-matrix model experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", library_version());

  std::string config_path;
  std::vector<std::string> assignments;
  std::optional<std::uint64_t> seed, threads, samples;
  std::optional<std::string> out_dir;
  app.add_option("--config", config_path, "flat key = value file, or a run manifest");
  app.add_option("--set", assignments, "override one config key (key=value); repeatable");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--out", out_dir, "output directory (default from ALTSHA_OUT, then config)");
  app.add_option("--samples", samples, "samples per point");

  std::map<std::string, std::map<std::string, std::string>> dedicated;
  std::string suite;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    for (const auto& [flag, key] : c.flags)
      sub->add_option_function<std::string>(flag, [&dedicated, name = c.name, key](const std::string& v) {
        dedicated[name][key] = v;
      }, key);
    if (c.name == "verify")
      sub->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(verify::suite_names()));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands())
    if (app.got_subcommand(c.name)) cmd = &c;

  Config cfg;
  try {
    if (!config_path.empty()) cfg.load_file(config_path);
    if (const char* env = std::getenv("ALTSHA_OUT"); env && *env) cfg.set("out", env);
    for (const auto& a : assignments) cfg.set_assignment(a);
    if (seed) cfg.set("seed", std::to_string(*seed));
    if (threads) cfg.set("threads", std::to_string(*threads));
    if (samples) cfg.set("samples", std::to_string(*samples));
    if (out_dir) cfg.set("out", *out_dir);
    for (const auto& [key, value] : dedicated[cmd->name]) cfg.set(key, value);
  } catch (const std::exception& e) {
    std::cerr << "altsha: " << e.what() << "\n";
    return kExitError;
  }

  if (cmd->name == "print-config") {
    std::cout << cfg.to_text(true);
    return 0;
  }
  if (const std::uint64_t t = cfg.u64("threads"); t > 0) omp_set_num_threads(static_cast<int>(t));

  Outputs out{fs::path(cfg.raw("out"))};
  int status = 0;
  try {
    if (cmd->name == "simulate") status = cmd_simulate(cfg, out);
    else if (cmd->name == "sha-dist") status = cmd_sha_dist(cfg, out);
    else if (cmd->name == "cl-dist") status = cmd_cl_dist(cfg, out);
    else if (cmd->name == "count") status = cmd_count(cfg, out);
    else if (cmd->name == "verify") status = cmd_verify(cfg, out, suite);
    else if (cmd->name == "period-scan") status = cmd_period_scan(cfg, out);
    else if (cmd->name == "predicted-table") status = cmd_predicted_table(cfg, out);

    RunManifest m;
    m.command = cmd->name == "verify" ? "verify " + suite : cmd->name;
    m.config = cfg.to_json();
    m.seed = cfg.u64("seed");
    m.timestamp = utc_timestamp();
    m.version = library_version();
    m.topic = cmd->topic;
    m.csv_schema = kCsvSchema;
    m.outputs = out.names();
    out.write("manifest.json", m.to_json().dump(2) + "\n");
  } catch (const std::exception& e) {
    out.rollback();
    std::cerr << "altsha " << cmd->name << ": " << e.what() << "\n";
    return kExitError;
  }
  return status;
}
