#include "cli.hpp"

#include "qmo/markov.hpp"
#include "qmo/scenarios.hpp"
#include "qmo/spectral.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace qmo::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::pair<std::string, std::string> key_value(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + kv + "'");
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError(what + ": not a number: '" + s + "'");
  return v;
}

struct RunOptions {
  std::vector<std::string> scenarios;
  std::vector<std::string> params;  // k=v or scenario.k=v
  std::vector<std::string> tols;    // name=value
  std::string out_dir = "qmo_results";
  std::string format = "json";
  std::string config;
  long long seed = -1;
  int jobs = 1;
};

struct Job {
  std::string id;
  json params = json::object();
  std::map<std::string, double> tol;
  ScenarioReport report;
  std::string error;  // scenario raised instead of reporting
  bool usage_error = false;
};

// Config file: {"scenario": "id" | [...], "params": {"k": v, "werner": {"q": v}},
// "tol": {"check": v}, "seed": n, "out": dir, "format": "json", "jobs": n}.
// Command-line values win.
void apply_config(RunOptions& o, const json& cfg, std::vector<std::pair<std::string, json>>& config_params,
                  std::map<std::string, double>& config_tol) {
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [k, v] : cfg.items()) {
    if (k == "scenario") {
      if (!o.scenarios.empty()) continue;
      if (v.is_string())
        o.scenarios = {v.get<std::string>()};
      else
        o.scenarios = v.get<std::vector<std::string>>();
    } else if (k == "params") {
      for (const auto& [pk, pv] : v.items()) config_params.emplace_back(pk, pv);
    } else if (k == "tol") {
      for (const auto& [tk, tv] : v.items()) config_tol[tk] = tv.get<double>();
    } else if (k == "seed") {
      if (o.seed < 0) o.seed = v.get<long long>();
    } else if (k == "out") {
      o.out_dir = v.get<std::string>();
    } else if (k == "format") {
      o.format = v.get<std::string>();
    } else if (k == "jobs") {
      o.jobs = v.get<int>();
    } else {
      throw UsageError("unknown config key: " + k);
    }
  }
}

std::string fmt_value(const json& v) {
  if (v.is_number_float()) {
    std::ostringstream s;
    s << std::setprecision(6) << v.get<double>();
    return s.str();
  }
  return v.dump();
}

int cmd_run(RunOptions o, bool out_given, bool format_given, bool jobs_given, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, json>> config_params;
  std::map<std::string, double> tol;
  if (!o.config.empty()) {
    RunOptions c = o;
    apply_config(c, load_json(o.config), config_params, tol);
    o.scenarios = c.scenarios;
    o.seed = c.seed;
    if (!out_given) o.out_dir = c.out_dir;
    if (!format_given) o.format = c.format;
    if (!jobs_given) o.jobs = c.jobs;
  }
  if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (o.scenarios.empty()) throw UsageError("--scenario is required");

  std::vector<std::string> ids;
  for (const auto& s : o.scenarios) {
    if (s == "all") {
      for (const auto& info : scenario_registry()) ids.push_back(info.id);
    } else {
      find_scenario(s);
      ids.push_back(s);
    }
  }
  std::vector<Job> jobs(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) jobs[i].id = ids[i];

  // Plain keys go to every selected scenario that accepts them; "id.key"
  // targets one scenario. A key nobody accepts is an error.
  auto assign = [&](const std::string& key, const json& value) {
    std::string target, name = key;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      target = key.substr(0, dot);
      name = key.substr(dot + 1);
    }
    bool used = false;
    for (auto& j : jobs) {
      if (!target.empty() && j.id != target) continue;
      if (find_scenario(j.id).defaults.contains(name)) {
        j.params[name] = value;
        used = true;
      }
    }
    if (!used) throw UsageError("no selected scenario accepts parameter '" + key + "'");
  };
  for (const auto& [k, v] : config_params) {
    if (v.is_object()) {
      for (const auto& [pk, pv] : v.items()) assign(k + "." + pk, pv);
    } else {
      assign(k, v);
    }
  }
  for (const auto& group : o.params)
    for (const auto& kv : split(group, ',')) {
      const auto [k, v] = key_value(kv);
      assign(k, v);
    }
  if (o.seed >= 0)
    for (auto& j : jobs)
      if (find_scenario(j.id).defaults.contains("seed")) j.params["seed"] = o.seed;
  for (const auto& group : o.tols)
    for (const auto& kv : split(group, ',')) {
      const auto [k, v] = key_value(kv);
      tol[k] = parse_double(v, "--tol " + k);
    }
  for (auto& j : jobs) {
    j.tol = tol;
    resolve_params(find_scenario(j.id), j.params);  // reject bad values before any work
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      Job& j = jobs[i];
      try {
        j.report = run_scenario(j.id, j.params, j.tol);
      } catch (const InvalidArgument& e) {
        j.usage_error = true;
        j.error = e.what();
      } catch (const std::exception& e) {
        j.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(o.jobs, static_cast<int>(jobs.size()));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& j : jobs)
    if (j.usage_error) throw UsageError(j.id + ": " + j.error);

  std::filesystem::create_directories(o.out_dir);
  bool all_pass = true;
  out << std::left << std::setw(26) << "scenario" << std::setw(8) << "checks" << std::setw(8) << "failed"
      << "status\n";
  for (auto& j : jobs) {
    if (!j.error.empty()) {
      // Still produce a report so the run is inspectable.
      j.report.scenario = j.id;
      j.report.params = resolve_params(find_scenario(j.id), j.params);
      j.report.boolean("scenario_completed", false).note = j.error;
    }
    const std::string base = (std::filesystem::path(o.out_dir) / j.id).string();
    if (o.format == "json") {
      write_atomic(base + ".json", to_json(j.report, j.id + ".").dump(2) + "\n");
    } else {
      write_atomic(base + ".csv", to_csv(j.report));
    }
    for (const auto& a : j.report.artifacts)
      write_atomic(base + "." + a.name + ".json",
                   json{{"name", a.name}, {"kind", a.kind}, {"data", a.data}}.dump(2) + "\n");
    const auto failed = j.report.failures();
    all_pass = all_pass && failed.empty();
    out << std::setw(26) << j.id << std::setw(8) << j.report.checks.size() << std::setw(8) << failed.size()
        << (failed.empty() ? "PASS" : "FAIL") << "\n";
  }
  for (const auto& j : jobs)
    for (const Check* c : j.report.failures()) {
      out << "failed: " << j.id << "/" << c->name << " [" << to_string(c->kind) << "] expected "
          << fmt_value(c->expected) << " actual " << fmt_value(c->actual);
      if (c->kind == CheckKind::equal) out << " tol " << c->tol;
      if (!c->note.empty()) out << " (" << c->note << ")";
      out << "\n";
    }
  (void)err;
  return all_pass ? kExitPass : kExitFail;
}

SpaceLabel find_leg(const SpaceList& spaces, const std::string& name) {
  for (const auto& s : spaces)
    if (s.name() == name) return s;
  throw UsageError("tensor has no leg " + name + " (legs: " + describe(spaces) + ")");
}

SpaceList legs_from(const SpaceList& spaces, const std::string& csv) {
  SpaceList out;
  for (const auto& n : split(csv, ',')) out.push_back(find_leg(spaces, n));
  return out;
}

struct CheckOptions {
  std::string tensor;
  std::string kind;
  std::string instrument;
  std::string memory, future, history;
  double tol = 1e-8;
};

int cmd_check(const CheckOptions& o, std::ostream& out) {
  json doc = load_json(o.tensor);
  // Artifact files from `run` wrap the tensor as {name, kind, data}.
  if (doc.is_object() && doc.contains("data") && doc.value("kind", "") == "process_tensor") doc = doc.at("data");
  const ProcessTensor ups = process_tensor_from_json(doc);
  json result;
  bool pass = false;
  if (o.kind == "causality") {
    const CausalityReport rep = check_causality(ups, o.tol);
    result = to_json(rep);
    pass = rep.pass;
  } else if (o.kind == "psd") {
    const double m = min_eigenvalue(ups.op);
    pass = m >= -o.tol;
    result = {{"min_eigenvalue", m}, {"tol", o.tol}, {"pass", pass}};
  } else if (o.kind == "markov-order") {
    if (o.instrument.empty() || o.memory.empty()) throw UsageError("markov-order needs --instrument and --memory");
    const InstrumentSequence seq = instrument_from_json(load_json(o.instrument));
    Partition part;
    if (o.future.empty() && o.history.empty()) {
      part = Partition::around(ups.spaces, legs_from(ups.spaces, o.memory));
    } else {
      part = {legs_from(ups.spaces, o.future), legs_from(ups.spaces, o.memory), legs_from(ups.spaces, o.history)};
    }
    part.validate_against(ups.spaces);
    const MarkovOrderReport rep = has_markov_order(ups, seq, part, o.tol, o.tol);
    result = to_json(rep);
    pass = rep.verdict;
  } else {
    throw UsageError("--kind must be causality, psd or markov-order");
  }
  out << result.dump(2) << "\n";
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"quantum Markov order toolkit"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "run scenarios and write reports");
  run_cmd->add_option("--scenario", ro.scenarios, "scenario id or 'all' (repeatable)");
  run_cmd->add_option("--param", ro.params, "k=v[,k=v] or id.k=v");
  run_cmd->add_option("--seed", ro.seed, "seed for every scenario that takes one");
  auto* out_opt = run_cmd->add_option("--out", ro.out_dir, "output directory");
  auto* fmt_opt = run_cmd->add_option("--format", ro.format, "json or csv");
  run_cmd->add_option("--tol", ro.tols, "check=value overrides (tolerance or bound)");
  auto* jobs_opt = run_cmd->add_option("--jobs", ro.jobs, "worker threads");
  run_cmd->add_option("--config", ro.config, "JSON run configuration");

  app.add_subcommand("list", "list scenarios and their parameters");

  CheckOptions co;
  auto* check_cmd = app.add_subcommand("check", "check a process tensor file");
  check_cmd->add_option("tensor", co.tensor, "process tensor JSON")->required();
  check_cmd->add_option("--kind", co.kind, "causality, psd or markov-order")->required();
  check_cmd->add_option("--instrument", co.instrument, "instrument JSON (markov-order)");
  check_cmd->add_option("--memory", co.memory, "memory legs, e.g. 3i,2o");
  check_cmd->add_option("--future", co.future, "future legs (default: all later legs)");
  check_cmd->add_option("--history", co.history, "history legs (default: all earlier legs)");
  check_cmd->add_option("--tol", co.tol, "tolerance");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(ro, out_opt->count() > 0, fmt_opt->count() > 0, jobs_opt->count() > 0, out, err);
    if (check_cmd->parsed()) return cmd_check(co, out);
    for (const auto& s : scenario_registry()) out << s.id << "  " << s.defaults.dump() << "\n    " << s.summary << "\n";
    return kExitPass;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    // Malformed tensors (bad dims, unknown labels) are input errors too.
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace qmo::cli
