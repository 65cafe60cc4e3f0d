// Copyright 2026 The pmp-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pmpaudit/experiments.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "pmpaudit/expmech.h"
#include "pmpaudit/gaussmech.h"

namespace pmpaudit {

namespace {

using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

GenSpec ApplySweep(const ExperimentConfig& config, double v) {
  GenSpec spec = config.gen;
  switch (config.kind) {
    case ExperimentKind::kExpMechSigmaSweep:
      spec.sigma_data = v;
      break;
    case ExperimentKind::kExpMechClipSweep:
    case ExperimentKind::kGaussClipSweep:
      spec.clip = v;
      break;
    case ExperimentKind::kExpMechDimSweep:
    case ExperimentKind::kGaussDimSweep:
      spec.d = static_cast<int>(v);
      break;
    case ExperimentKind::kGaussEpsSweep:
      break;
  }
  return spec;
}

SweepRow FinishRow(double sweep_value, int trial, double eps_tilde,
                   double eps_x, double eps_worst) {
  SweepRow row;
  row.sweep_value = sweep_value;
  row.trial = trial;
  row.eps_tilde = eps_tilde;
  row.eps_x = eps_x;
  row.eps_worst = eps_worst;
  row.ratio = eps_tilde / eps_worst;
  row.ratio_x = eps_tilde / eps_x;
  if (!(row.ratio <= row.ratio_x && row.ratio_x <= 1.0 + 1e-9)) {
    throw std::logic_error(
        "SweepRow: ordering eps~(X) <= eps(X) <= eps violated");
  }
  return row;
}

SweepRow FailedRow(double sweep_value, int trial, const std::string& why) {
  SweepRow row;
  row.sweep_value = sweep_value;
  row.trial = trial;
  row.eps_tilde = row.eps_x = row.eps_worst = row.ratio = row.ratio_x = kNan;
  row.failed = true;
  row.error = why;
  return row;
}

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string("ExperimentConfig: ") + what +
                                " must be positive");
  }
}

}  // namespace

ExperimentKind ParseExperimentKind(const std::string& name) {
  if (name == "expmech-sigma-sweep") return ExperimentKind::kExpMechSigmaSweep;
  if (name == "expmech-clip-sweep") return ExperimentKind::kExpMechClipSweep;
  if (name == "expmech-dim-sweep") return ExperimentKind::kExpMechDimSweep;
  if (name == "gauss-epsx-sweep") return ExperimentKind::kGaussEpsSweep;
  if (name == "gauss-clip-sweep") return ExperimentKind::kGaussClipSweep;
  if (name == "gauss-dim-sweep") return ExperimentKind::kGaussDimSweep;
  throw std::invalid_argument("unknown experiment: " + name);
}

std::string ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kExpMechSigmaSweep: return "expmech-sigma-sweep";
    case ExperimentKind::kExpMechClipSweep: return "expmech-clip-sweep";
    case ExperimentKind::kExpMechDimSweep: return "expmech-dim-sweep";
    case ExperimentKind::kGaussEpsSweep: return "gauss-epsx-sweep";
    case ExperimentKind::kGaussClipSweep: return "gauss-clip-sweep";
    case ExperimentKind::kGaussDimSweep: return "gauss-dim-sweep";
  }
  return "unknown";
}

bool IsExpMechKind(ExperimentKind kind) {
  return kind == ExperimentKind::kExpMechSigmaSweep ||
         kind == ExperimentKind::kExpMechClipSweep ||
         kind == ExperimentKind::kExpMechDimSweep;
}

namespace {

ExperimentConfig ParseExperimentConfigImpl(const std::string& json_text) {
  const json j = json::parse(json_text);

  ExperimentConfig config;
  config.kind = ParseExperimentKind(j.at("experiment").get<std::string>());
  config.sweep_values = j.at("sweep_values").get<std::vector<double>>();
  if (config.sweep_values.empty()) {
    throw std::invalid_argument("ExperimentConfig: sweep_values is empty");
  }
  for (std::size_t i = 1; i < config.sweep_values.size(); ++i) {
    if (!(config.sweep_values[i] > config.sweep_values[i - 1])) {
      throw std::invalid_argument(
          "ExperimentConfig: sweep_values must be strictly increasing");
    }
  }
  config.trials = j.value("trials", 20);
  if (config.trials < 1) {
    throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  }

  const json& g = j.at("gen");
  config.gen.n = g.at("n").get<int>();
  config.gen.d = g.value("d", 1);
  config.gen.m = g.value("m", 0);
  config.gen.sigma_data = g.value("sigma_data", 1.0);
  config.gen.clip = g.at("clip").get<double>();
  config.gen.outlier_count = g.value("outlier_count", 0);
  config.gen.outlier_factor = g.value("outlier_factor", 1.0);
  const std::string center = g.value("center", "origin");
  if (center == "candidate_1") {
    config.gen.center = CenterKind::kCandidateOne;
  } else if (center == "origin") {
    config.gen.center = CenterKind::kOrigin;
  } else {
    throw std::invalid_argument("ExperimentConfig: center must be candidate_1 or origin");
  }
  config.gen.seed = g.at("seed").get<std::uint64_t>();
  config.output_path = j.value("output_path", "");

  const bool dim_sweep = config.kind == ExperimentKind::kExpMechDimSweep ||
                         config.kind == ExperimentKind::kGaussDimSweep;
  if (dim_sweep) {
    for (double v : config.sweep_values) {
      if (v != std::floor(v) || v < 1.0) {
        throw std::invalid_argument(
            "ExperimentConfig: dimension sweep values must be positive integers");
      }
    }
  }
  if (config.kind == ExperimentKind::kGaussEpsSweep &&
      !(config.sweep_values.front() > 0.0)) {
    throw std::invalid_argument(
        "ExperimentConfig: epsilon sweep values must be positive");
  }

  if (IsExpMechKind(config.kind)) {
    config.target_eps_x = j.at("target_eps_x").get<double>();
    RequirePositive(config.target_eps_x, "target_eps_x");
    if (config.gen.m < 2) {
      throw std::invalid_argument(
          "ExperimentConfig: exponential-mechanism experiments need m >= 2");
    }
  } else {
    config.delta = j.at("delta").get<double>();
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
      throw std::invalid_argument("ExperimentConfig: delta must be in (0, 1)");
    }
    if (config.kind != ExperimentKind::kGaussEpsSweep) {
      config.target_eps = j.at("target_eps").get<double>();
      RequirePositive(config.target_eps, "target_eps");
    }
  }

  // Validate the generator spec once on the smallest sweep value.
  ValidateGenSpec(ApplySweep(config, config.sweep_values.front()));
  return config;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  try {
    return ParseExperimentConfigImpl(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config error: ") + e.what());
  }
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExperimentConfig(text.str());
}

SweepRow ComputeCell(const ExperimentConfig& config, double sweep_value,
                     int trial) {
  const GenSpec spec = ApplySweep(config, sweep_value);
  try {
    const Instance inst = MakeTrialInstance(spec, static_cast<std::uint64_t>(trial));
    if (IsExpMechKind(config.kind)) {
      const CandidateSet& cands = *inst.candidates;
      const ExpMechConfig mech = CalibrateExpMechToSubpopDp(
          inst.parent, cands, spec.clip, config.target_eps_x);
      const double eps_x = ExpMechSubpopDp(inst.parent, cands, mech).eps;
      const double eps_tilde = ExpMechPmp(inst.parent, cands, mech).eps;
      return FinishRow(sweep_value, trial, eps_tilde, eps_x, mech.eps_dp);
    }

    const double target = config.kind == ExperimentKind::kGaussEpsSweep
                              ? sweep_value
                              : config.target_eps;
    const double worst_sensitivity = 2.0 * spec.clip / spec.n;
    const double sigma = CalibrateGaussSigma(worst_sensitivity, target,
                                             config.delta);
    const SumQuery query = MeanQuery(spec.n);
    const double eps_worst =
        GaussWorstCaseEpsilon(spec.clip, spec.n, sigma, config.delta).eps;
    const double eps_x =
        GaussSubpopDpEpsilon(inst.parent, query, sigma, config.delta).eps;
    if (!(eps_x > 0.0)) {
      throw CalibrationError("degenerate instance: eps(X) = 0");
    }
    const double eps_tilde =
        GaussPmpEpsilon(inst.parent, query, sigma, config.delta).eps;
    return FinishRow(sweep_value, trial, eps_tilde, eps_x, eps_worst);
  } catch (const CalibrationError& e) {
    return FailedRow(sweep_value, trial, e.what());
  }
}

int ThreadCap() {
  if (const char* env = std::getenv("PMP_AUDIT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

RunResult RunExperiment(const ExperimentConfig& config) {
  const int values = static_cast<int>(config.sweep_values.size());
  const int cells = values * config.trials;

  RunResult result;
  result.total_cells = cells;
  result.trial_rows.resize(cells);

  const auto run_cell = [&](int cell) {
    const int vi = cell / config.trials;
    const int trial = cell % config.trials;
    result.trial_rows[cell] =
        ComputeCell(config, config.sweep_values[vi], trial);
  };

  const int workers = std::min(ThreadCap(), cells);
  if (workers <= 1) {
    for (int cell = 0; cell < cells; ++cell) run_cell(cell);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (int cell = next.fetch_add(1); cell < cells;
               cell = next.fetch_add(1)) {
            run_cell(cell);
          }
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  for (int vi = 0; vi < values; ++vi) {
    SweepRow mean;
    mean.sweep_value = config.sweep_values[vi];
    mean.trial = -1;
    int ok = 0;
    double tilde = 0, ex = 0, worst = 0, ratio = 0, ratio_x = 0;
    for (int t = 0; t < config.trials; ++t) {
      const SweepRow& row = result.trial_rows[vi * config.trials + t];
      if (row.failed) {
        ++result.failed_cells;
        continue;
      }
      ++ok;
      tilde += row.eps_tilde;
      ex += row.eps_x;
      worst += row.eps_worst;
      ratio += row.ratio;
      ratio_x += row.ratio_x;
    }
    if (ok == 0) {
      mean.eps_tilde = mean.eps_x = mean.eps_worst = mean.ratio = mean.ratio_x =
          kNan;
      mean.failed = true;
      mean.error = "all trials failed";
    } else {
      mean.eps_tilde = tilde / ok;
      mean.eps_x = ex / ok;
      mean.eps_worst = worst / ok;
      mean.ratio = ratio / ok;
      mean.ratio_x = ratio_x / ok;
    }
    result.mean_rows.push_back(std::move(mean));
  }
  return result;
}

namespace {

void WriteRow(std::ostream& out, const SweepRow& row) {
  out << FormatDouble(row.sweep_value) << ',' << row.trial << ','
      << FormatDouble(row.eps_tilde) << ',' << FormatDouble(row.eps_x) << ','
      << FormatDouble(row.eps_worst) << ',' << FormatDouble(row.ratio) << ','
      << FormatDouble(row.ratio_x) << '\n';
}

}  // namespace

void WriteCsv(const RunResult& result, const ExperimentConfig& config,
              std::ostream& out, bool deterministic) {
  if (!deterministic) {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%FT%TZ", std::gmtime(&now));
    out << "# pmp-audit experiment=" << ExperimentKindName(config.kind)
        << " generated=" << stamp << '\n';
  }
  out << "sweep_value,trial,eps_tilde,eps_X,eps_worst,ratio,ratio_X\n";
  for (const SweepRow& row : result.trial_rows) WriteRow(out, row);
  for (const SweepRow& row : result.mean_rows) WriteRow(out, row);
}

void WriteCsvFile(const RunResult& result, const ExperimentConfig& config,
                  const std::string& path, bool deterministic) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  WriteCsv(result, config, out, deterministic);
}

const SweepRow& MeanRowAt(const RunResult& result, double sweep_value) {
  for (const SweepRow& row : result.mean_rows) {
    if (row.sweep_value == sweep_value) return row;
  }
  throw std::out_of_range("no mean row for sweep value " +
                          std::to_string(sweep_value));
}

}  // namespace pmpaudit
