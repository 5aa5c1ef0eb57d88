/* Copyright 2026 The collperf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "collperf/error.hpp"
#include "collperf/models.hpp"
#include "collperf/profile.hpp"
#include "collperf/simulator.hpp"
#include "collperf/tuning.hpp"
#include "output_record.hpp"

namespace collperf::cli {
namespace {

// Bad arguments detected after CLI11 parsing; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string profile;
  std::string profile_format;
  std::string format = "csv";
  std::string op = "broadcast";
  std::string strategy;
  std::vector<std::string> strategies;
  std::string sweep;
  std::string semantics = "one-port-overlap";
  std::string trace;
  std::string measurements;
  std::string label;
  std::int64_t procs = 0;
  std::int64_t bytes = 0;
  std::int64_t segment = 0;
  std::int64_t from = 0;
  std::int64_t to = 0;
  std::int64_t step = 1;
  double gamma = 0.0;
  bool refine = false;
  bool no_auto_segment = false;
  bool dyadic = false;
  bool simulate = false;

  CLI::Option* segment_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* strategy_opt = nullptr;
  CLI::Option* procs_opt = nullptr;
  CLI::Option* bytes_opt = nullptr;

  std::optional<std::int64_t> segment_arg() const {
    if (segment_opt != nullptr && segment_opt->count() > 0) return segment;
    return std::nullopt;
  }
  std::optional<double> gamma_arg() const {
    if (gamma_opt != nullptr && gamma_opt->count() > 0) return gamma;
    return std::nullopt;
  }
};

NetworkProfile open_profile(const Options& o) {
  ProfileFormat fmt = profile_format_for(o.profile);
  if (o.profile_format == "json") fmt = ProfileFormat::json;
  if (o.profile_format == "columns") fmt = ProfileFormat::columns;
  return load_profile(o.profile, fmt);
}

Operation operation_of(const Options& o) {
  const auto op = parse_operation(o.op);
  if (!op) throw UsageError("--op: unknown operation '" + o.op + "'");
  return *op;
}

Strategy strategy_named(const std::string& name, Operation op) {
  const auto s = parse_strategy(name);
  if (!s) throw UsageError("--strategy: unknown strategy '" + name + "'");
  if (!in_catalog(op, *s)) {
    throw UsageError("--strategy: '" + name + "' is not a " +
                     std::string(to_string(op)) + " strategy");
  }
  return *s;
}

Strategy strategy_of(const Options& o, Operation op) {
  if (o.strategy.empty()) {
    if (op == Operation::alltoall) return Strategy::direct_exchange;
    throw UsageError("--strategy is required for " + std::string(to_string(op)));
  }
  return strategy_named(o.strategy, op);
}

void check_segment_flag(const Options& o, Strategy s) {
  if (is_segmented(s) && !o.segment_arg()) {
    throw UsageError("--segment is required for strategy '" +
                     std::string(to_string(s)) + "'");
  }
  if (!is_segmented(s) && o.segment_arg()) {
    throw UsageError("--segment only applies to segmented strategies, not '" +
                     std::string(to_string(s)) + "'");
  }
}

std::string key_for(const std::string& label) {
  std::string k = "term_" + label;
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

OutputRecord base_record(Operation op, Strategy s, std::int64_t procs,
                         std::int64_t bytes) {
  OutputRecord r;
  r.set("operation", std::string(to_string(op)));
  r.set("strategy", std::string(to_string(s)));
  r.set("procs", procs);
  r.set("bytes", bytes);
  return r;
}

void add_prediction(OutputRecord& r, const Prediction& p, bool with_terms) {
  if (p.request.segment_bytes) {
    r.set("segment", *p.request.segment_bytes);
  }
  r.set("predicted_us", p.total);
  if (p.upper_bound) r.set("bound", std::string("upper"));
  if (with_terms) {
    for (const Term& t : p.terms) r.set(key_for(t.label), t.value);
  }
}

void emit(std::ostream& out, const Options& o, std::span<const OutputRecord> rows,
          bool table) {
  if (o.format == "json") {
    write_json(out, rows, table);
  } else {
    write_csv(out, rows);
  }
}

void warn(std::ostream& err, const Prediction& p) {
  for (const std::string& note : p.notes) err << "warning: " << note << '\n';
}

// ---------------------------------------------------------------- commands

int cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
  const Operation op = operation_of(o);
  const Strategy s = strategy_of(o, op);
  check_segment_flag(o, s);
  const NetworkProfile profile = open_profile(o);
  OutputRecord r = base_record(op, s, o.procs, o.bytes);
  if (op == Operation::alltoall) {
    const AlltoallBounds b = alltoall_bounds(profile, o.procs, o.bytes);
    r.set("lower_us", b.lower.total);
    r.set("upper_us", b.upper.total);
    if (const auto gamma = o.gamma_arg()) {
      const Prediction p = predict_alltoall(profile, o.procs, o.bytes, *gamma);
      warn(err, p);
      r.set("gamma", *gamma);
      add_prediction(r, p, true);
    }
  } else {
    if (o.gamma_arg()) throw UsageError("--gamma only applies to --op alltoall");
    const Prediction p =
        predict(profile, {op, s, o.procs, o.bytes, o.segment_arg()});
    add_prediction(r, p, true);
  }
  emit(out, o, std::span(&r, 1), false);
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream&) {
  const Operation op = operation_of(o);
  if (op == Operation::alltoall) {
    throw UsageError("compare supports --op broadcast or scatter");
  }
  const NetworkProfile profile = open_profile(o);
  std::vector<OutputRecord> rows;
  for (const StrategyChoice& c :
       rank_strategies(profile, op, o.procs, o.bytes, !o.no_auto_segment)) {
    OutputRecord r = base_record(op, c.strategy, o.procs, o.bytes);
    add_prediction(r, c.predicted, false);
    rows.push_back(std::move(r));
  }
  emit(out, o, rows, true);
  return kExitOk;
}

int cmd_select(const Options& o, std::ostream& out, std::ostream&) {
  const Operation op = operation_of(o);
  if (op == Operation::alltoall) {
    throw UsageError("select supports --op broadcast or scatter");
  }
  const NetworkProfile profile = open_profile(o);
  const StrategyChoice c =
      select_strategy(profile, op, o.procs, o.bytes, !o.no_auto_segment);
  OutputRecord r = base_record(op, c.strategy, o.procs, o.bytes);
  add_prediction(r, c.predicted, true);
  emit(out, o, std::span(&r, 1), false);
  return kExitOk;
}

int cmd_optimize_segment(const Options& o, std::ostream& out, std::ostream&) {
  const Operation op = operation_of(o);
  const Strategy s = strategy_of(o, op);
  if (op != Operation::broadcast || !is_segmented(s)) {
    throw UsageError("optimize-segment needs --op broadcast and a segmented strategy");
  }
  const NetworkProfile profile = open_profile(o);
  const SegmentChoice c = optimize_segment(profile, op, s, o.procs, o.bytes, o.refine);
  OutputRecord r = base_record(op, s, o.procs, o.bytes);
  add_prediction(r, c.predicted, false);
  r.set("segment_count", make_segmentation(o.bytes, c.segment_bytes).segment_count);
  r.set("candidates_examined", c.candidates_examined);
  r.set("refined", o.refine);
  emit(out, o, std::span(&r, 1), false);
  return kExitOk;
}

std::vector<std::int64_t> sweep_points(const Options& o) {
  if (o.from < 1 || o.to < o.from) {
    throw UsageError("empty sweep range [" + std::to_string(o.from) + ", " +
                     std::to_string(o.to) + "]");
  }
  std::vector<std::int64_t> points;
  if (o.dyadic) {
    if (o.sweep != "bytes") throw UsageError("--dyadic applies to --sweep bytes");
    for (std::int64_t v = o.from; v <= o.to; v *= 2) {
      points.push_back(v);
      if (v > o.to / 2) break;
    }
  } else {
    if (o.step < 1) throw UsageError("--step must be >= 1");
    for (std::int64_t v = o.from; v <= o.to; v += o.step) points.push_back(v);
  }
  return points;
}

int cmd_curve(const Options& o, std::ostream& out, std::ostream& err) {
  const Operation op = operation_of(o);
  if (o.sweep != "bytes" && o.sweep != "procs") {
    throw UsageError("--sweep must be 'bytes' or 'procs'");
  }
  const bool bytes_sweep = o.sweep == "bytes";
  if (bytes_sweep && o.procs_opt->count() == 0) {
    throw UsageError("--procs is required for a bytes sweep");
  }
  if (!bytes_sweep && o.bytes_opt->count() == 0) {
    throw UsageError("--bytes is required for a procs sweep");
  }
  std::vector<Strategy> strategies;
  for (const std::string& name : o.strategies) {
    strategies.push_back(strategy_named(name, op));
  }
  if (strategies.empty()) {
    for (Strategy s : catalog(op)) {
      if (!is_segmented(s)) strategies.push_back(s);
    }
  }
  if (o.segment_arg()) {
    for (Strategy s : strategies) check_segment_flag(o, s);
  }
  const std::vector<std::int64_t> points = sweep_points(o);
  const NetworkProfile profile = open_profile(o);

  std::vector<OutputRecord> rows;
  for (std::int64_t point : points) {
    const std::int64_t procs = bytes_sweep ? o.procs : point;
    const std::int64_t bytes = bytes_sweep ? point : o.bytes;
    for (Strategy s : strategies) {
      OutputRecord r = base_record(op, s, procs, bytes);
      std::optional<std::int64_t> segment;
      if (op == Operation::alltoall) {
        const AlltoallBounds b = alltoall_bounds(profile, procs, bytes);
        r.set("lower_us", b.lower.total);
        r.set("upper_us", b.upper.total);
        if (const auto gamma = o.gamma_arg()) {
          const Prediction p = predict_alltoall(profile, procs, bytes, *gamma);
          if (rows.empty()) warn(err, p);
          r.set("predicted_us", p.total);
        }
      } else {
        Prediction p;
        if (is_segmented(s)) {
          if (o.segment_arg()) {
            segment = std::min(o.segment, bytes);
            p = predict(profile, {op, s, procs, bytes, segment});
          } else {
            p = optimize_segment(profile, op, s, procs, bytes, false).predicted;
            segment = p.request.segment_bytes;
          }
        } else {
          p = predict(profile, {op, s, procs, bytes, std::nullopt});
        }
        add_prediction(r, p, false);
      }
      if (o.simulate && is_schedulable(op, s)) {
        const Schedule sched = build_schedule(op, s, procs, bytes, segment);
        r.set("simulated_us",
              run(sched, profile, Semantics::one_port_overlap).completion);
      }
      rows.push_back(std::move(r));
    }
  }
  emit(out, o, rows, true);
  return kExitOk;
}

int cmd_fit_gamma(const Options& o, std::ostream& out, std::ostream&) {
  const NetworkProfile profile = open_profile(o);
  MeasurementSet set = load_measurements(o.measurements);
  if (!o.label.empty()) set.network_label = o.label;
  const GammaModel m = fit_gamma(profile, set);
  OutputRecord r;
  r.set("gamma", m.gamma);
  r.set("residual", m.residual);
  r.set("n_points", static_cast<std::int64_t>(m.n_points));
  r.set("profile_name", m.profile_name);
  r.set("network_label", set.network_label);
  emit(out, o, std::span(&r, 1), false);
  return kExitOk;
}

double relative_difference(double simulated, double predicted) {
  const double scale = std::max(std::abs(simulated), std::abs(predicted));
  return scale == 0.0 ? 0.0 : std::abs(simulated - predicted) / scale;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  const Operation op = operation_of(o);
  const Strategy s = strategy_of(o, op);
  check_segment_flag(o, s);
  if (!is_schedulable(op, s)) {
    throw UsageError("strategy '" + std::string(to_string(s)) +
                     "' has no event-level schedule");
  }
  const auto semantics = parse_semantics(o.semantics);
  if (!semantics) throw UsageError("--semantics: unknown value '" + o.semantics + "'");
  const NetworkProfile profile = open_profile(o);
  const Schedule sched = build_schedule(op, s, o.procs, o.bytes, o.segment_arg());
  const SimResult res = run(sched, profile, *semantics);

  OutputRecord r = base_record(op, s, o.procs, o.bytes);
  if (const auto seg = o.segment_arg()) r.set("segment", *seg);
  r.set("semantics", std::string(to_string(*semantics)));
  r.set("transfers", static_cast<std::int64_t>(sched.transfers.size()));
  r.set("simulated_us", res.completion);

  std::optional<double> predicted;
  if (op == Operation::alltoall) {
    const AlltoallBounds b = alltoall_bounds(profile, o.procs, o.bytes);
    predicted = *semantics == Semantics::serialized ? b.upper.total : b.lower.total;
  } else if (*semantics == Semantics::one_port_overlap) {
    predicted = predict(profile, {op, s, o.procs, o.bytes, o.segment_arg()}).total;
  }
  if (predicted) {
    r.set("predicted_us", *predicted);
    r.set("rel_diff", relative_difference(res.completion, *predicted));
  }
  if (!o.trace.empty()) {
    std::ofstream trace(o.trace, std::ios::trunc);
    if (!trace) throw Error("cannot write trace '" + o.trace + "'");
    write_trace_csv(trace, sched, res);
  }
  emit(out, o, std::span(&r, 1), false);
  return kExitOk;
}

// ------------------------------------------------------------------ wiring

void add_profile_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--profile", o.profile, "Network profile (JSON or columns)")
      ->required();
  cmd->add_option("--profile-format", o.profile_format,
                  "Override format detection (json|columns)")
      ->check(CLI::IsMember({"json", "columns"}));
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

void add_request_options(CLI::App* cmd, Options& o, bool strategy, bool sizes) {
  cmd->add_option("--op", o.op, "broadcast | scatter | alltoall");
  if (strategy) {
    o.strategy_opt = cmd->add_option("--strategy", o.strategy, "Strategy identifier");
  }
  if (sizes) {
    o.procs_opt = cmd->add_option("--procs", o.procs, "Process count P")
                      ->required()
                      ->check(CLI::PositiveNumber);
    o.bytes_opt = cmd->add_option("--bytes", o.bytes, "Message size m per destination")
                      ->required()
                      ->check(CLI::PositiveNumber);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Performance prediction for MPI-style collective communication", "collperf"};
  app.require_subcommand(1);

  std::function<int(const Options&, std::ostream&, std::ostream&)> handler;
  const auto on = [&](CLI::App* cmd, auto fn) {
    cmd->callback([&handler, fn] { handler = fn; });
  };

  CLI::App* predict_cmd = app.add_subcommand("predict", "Closed-form prediction for one request");
  add_profile_options(predict_cmd, o);
  add_request_options(predict_cmd, o, true, true);
  o.segment_opt = predict_cmd->add_option("--segment", o.segment, "Segment size s")
                      ->check(CLI::PositiveNumber);
  o.gamma_opt = predict_cmd->add_option("--gamma", o.gamma, "All-to-all congestion factor");
  on(predict_cmd, cmd_predict);

  CLI::App* compare_cmd = app.add_subcommand("compare", "Rank every strategy of an operation");
  add_profile_options(compare_cmd, o);
  add_request_options(compare_cmd, o, false, true);
  compare_cmd->add_flag("--no-auto-segment", o.no_auto_segment,
                        "Skip segmented strategies instead of optimizing s");
  on(compare_cmd, cmd_compare);

  CLI::App* curve_cmd = app.add_subcommand("curve", "Predictions over a size or process sweep");
  add_profile_options(curve_cmd, o);
  curve_cmd->add_option("--op", o.op, "broadcast | scatter | alltoall");
  curve_cmd->add_option("--strategy", o.strategies, "Strategy (repeatable)");
  curve_cmd->add_option("--sweep", o.sweep, "bytes | procs")->required();
  curve_cmd->add_option("--from", o.from, "First sweep value")->required();
  curve_cmd->add_option("--to", o.to, "Last sweep value")->required();
  curve_cmd->add_option("--step", o.step, "Linear sweep step");
  curve_cmd->add_flag("--dyadic", o.dyadic, "Double the size at each point");
  o.procs_opt = curve_cmd->add_option("--procs", o.procs, "Fixed P for a bytes sweep")
                    ->check(CLI::PositiveNumber);
  o.bytes_opt = curve_cmd->add_option("--bytes", o.bytes, "Fixed m for a procs sweep")
                    ->check(CLI::PositiveNumber);
  o.segment_opt = curve_cmd->add_option("--segment", o.segment,
                                        "Fixed segment size (default: optimized)")
                      ->check(CLI::PositiveNumber);
  o.gamma_opt = curve_cmd->add_option("--gamma", o.gamma, "All-to-all congestion factor");
  curve_cmd->add_flag("--simulate", o.simulate, "Add simulated_us where schedulable");
  on(curve_cmd, cmd_curve);

  CLI::App* opt_cmd = app.add_subcommand("optimize-segment", "Best segment size for a segmented strategy");
  add_profile_options(opt_cmd, o);
  add_request_options(opt_cmd, o, true, true);
  opt_cmd->add_flag("--refine", o.refine, "Hill-climb from the dyadic optimum");
  on(opt_cmd, cmd_optimize_segment);

  CLI::App* select_cmd = app.add_subcommand("select", "Fastest strategy for an operation");
  add_profile_options(select_cmd, o);
  add_request_options(select_cmd, o, false, true);
  select_cmd->add_flag("--no-auto-segment", o.no_auto_segment,
                       "Skip segmented strategies instead of optimizing s");
  on(select_cmd, cmd_select);

  CLI::App* fit_cmd = app.add_subcommand("fit-gamma", "Fit the all-to-all congestion factor");
  add_profile_options(fit_cmd, o);
  fit_cmd->add_option("--measurements", o.measurements, "CSV: procs,bytes,time_us")
      ->required();
  fit_cmd->add_option("--label", o.label, "Network label (default: file stem)");
  on(fit_cmd, cmd_fit_gamma);

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Event-level execution of a strategy");
  add_profile_options(sim_cmd, o);
  add_request_options(sim_cmd, o, true, true);
  o.segment_opt = sim_cmd->add_option("--segment", o.segment, "Segment size s")
                      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--semantics", o.semantics, "one-port-overlap | serialized");
  sim_cmd->add_option("--trace", o.trace, "Write the event trace as CSV");
  on(sim_cmd, cmd_simulate);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  // Several subcommands share option names; bind presence checks to the
  // one that actually ran.
  CLI::App* active = app.get_subcommands().front();
  o.segment_opt = active->get_option_no_throw("--segment");
  o.gamma_opt = active->get_option_no_throw("--gamma");
  o.procs_opt = active->get_option_no_throw("--procs");
  o.bytes_opt = active->get_option_no_throw("--bytes");
  // fit-gamma renders JSON unless --format says otherwise.
  if (active == fit_cmd && active->get_option("--format")->count() == 0) {
    o.format = "json";
  }

  try {
    return handler(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RequestError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace collperf::cli
