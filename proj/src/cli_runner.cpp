#include "ckqed/cli_runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace ckqed::cli {
namespace {

using nlohmann::json;

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

json json_number(double x) {
  if (!std::isfinite(x)) return json(x > 0 ? "inf" : (x < 0 ? "-inf" : "nan"));
  return json(round12(x));
}

// Header names stay plain CSV tokens: commas inside branch labels become
// semicolons so rows split cleanly on ','.
std::string csv_field(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '"' || c == '\n') c = ';';
  return s;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

Complex cfg_alpha(const ScenarioConfig& cfg) {
  if (cfg.protocol == "entanglement-transfer" && cfg.gamma)
    return Complex(0, -*cfg.gamma);  // gamma = i alpha convention
  return Complex(cfg.alpha.value_or(2.0), 0);
}

Complex cfg_beta(const ScenarioConfig& cfg) {
  if (cfg.protocol == "entanglement-transfer" && cfg.gamma) return Complex(0, -*cfg.gamma);
  if (cfg.beta) return Complex(*cfg.beta, 0);
  return cfg_alpha(cfg);
}

ProtocolOptions cfg_options(const ScenarioConfig& cfg) {
  return ProtocolOptions{cfg.n_max, cfg.delta_ratio};
}

}  // namespace

const std::vector<std::string> kProtocolNames = {
    "transfer-qubit-to-qubit", "transfer-qubit-to-cv",     "entanglement-transfer",
    "reciprocation",           "multipair-transfer",        "multipair-reciprocation",
    "entanglement-swap",
};

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config file parse error: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");

  ScenarioConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "protocol")
        cfg.protocol = value.get<std::string>();
      else if (key == "a")
        cfg.a = value.get<double>();
      else if (key == "b")
        cfg.b = value.get<double>();
      else if (key == "alpha")
        cfg.alpha = value.get<double>();
      else if (key == "beta")
        cfg.beta = value.get<double>();
      else if (key == "gamma")
        cfg.gamma = value.get<double>();
      else if (key == "delta-width")
        cfg.delta_width = value.get<double>();
      else if (key == "n-pairs")
        cfg.n_pairs = value.get<int>();
      else if (key == "mode")
        cfg.mode = value.get<std::string>();
      else if (key == "postselect")
        cfg.postselect = value.get<bool>();
      else if (key == "n-max")
        cfg.n_max = value.get<int>();
      else if (key == "delta-ratio")
        cfg.delta_ratio = value.get<double>();
      else if (key == "outcomes")
        cfg.outcomes = value.get<std::string>();
      else if (key == "out")
        cfg.out = value.get<std::string>();
      else
        throw ConfigError("unknown config key: " + key);
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return cfg;
}

void validate_config(const ScenarioConfig& cfg) {
  bool known = false;
  for (const auto& name : kProtocolNames) known = known || name == cfg.protocol;
  if (!known) throw ConfigError("unknown protocol: '" + cfg.protocol + "'");
  if (cfg.mode != "ideal" && cfg.mode != "gaussian")
    throw ConfigError("mode must be 'ideal' or 'gaussian'");

  // Precondition-level checks mirror the protocol entry points.
  const bool is_qubit_input =
      cfg.protocol == "transfer-qubit-to-qubit" || cfg.protocol == "transfer-qubit-to-cv";
  if (is_qubit_input && std::abs(cfg.a * cfg.a + cfg.b * cfg.b - 1.0) > 1e-9)
    throw PreconditionError("input amplitudes must satisfy a^2 + b^2 = 1");
  if (cfg.delta_width < 0.0) throw PreconditionError("delta-width must be non-negative");
  if (cfg.protocol.rfind("multipair", 0) == 0) {
    if (cfg.n_pairs < 1 || cfg.n_pairs > 3)
      throw PreconditionError("n-pairs must lie in [1, 3]");
    if (!cfg.outcomes.empty() &&
        (static_cast<int>(cfg.outcomes.size()) != 2 * cfg.n_pairs ||
         cfg.outcomes.find_first_not_of("+-") != std::string::npos))
      throw PreconditionError("outcomes must be 2n characters of +/-");
  }
  const bool needs_field = cfg.protocol != "transfer-qubit-to-qubit";
  if (needs_field && cfg_alpha(cfg) == Complex(0, 0))
    throw PreconditionError("alpha must be nonzero for this protocol");
}

ProtocolReport run_protocol(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const ProtocolOptions opt = cfg_options(cfg);

  ProtocolReport rep;
  if (cfg.protocol == "transfer-qubit-to-qubit") {
    rep = transfer_qubit_to_qubit(cfg.a, cfg.b);
  } else if (cfg.protocol == "transfer-qubit-to-cv") {
    rep = transfer_qubit_to_cv(cfg.a, cfg.b, CoherentLabel(cfg_alpha(cfg)), cfg.postselect, opt);
  } else if (cfg.protocol == "entanglement-transfer") {
    rep = entanglement_transfer(CoherentLabel(cfg_alpha(cfg)), CoherentLabel(cfg_beta(cfg)), opt);
  } else if (cfg.protocol == "reciprocation") {
    const auto mode =
        cfg.mode == "gaussian" ? ReciprocationMode::Gaussian : ReciprocationMode::Ideal;
    rep = reciprocation(CoherentLabel(cfg_alpha(cfg)), CoherentLabel(cfg_beta(cfg)),
                        cfg.delta_width, mode, {}, opt);
  } else if (cfg.protocol == "multipair-transfer") {
    const std::string outcomes =
        cfg.outcomes.empty() ? std::string(2 * cfg.n_pairs, '+') : cfg.outcomes;
    rep = multipair_transfer(cfg.n_pairs, CoherentLabel(cfg_alpha(cfg)), outcomes, opt);
  } else if (cfg.protocol == "multipair-reciprocation") {
    rep = multipair_reciprocation(cfg.n_pairs, CoherentLabel(cfg_alpha(cfg)), {}, opt);
  } else if (cfg.protocol == "entanglement-swap") {
    rep = entanglement_swap(CoherentLabel(cfg_alpha(cfg)), {}, opt);
  } else {
    throw ConfigError("unknown protocol: '" + cfg.protocol + "'");
  }

  double total = 0.0;
  for (const auto& b : rep.branches) total += b.probability;
  if (std::abs(total - 1.0) > 1e-8)
    throw ToleranceError("branch probabilities sum to " + format_number(total));
  return rep;
}

std::string serialize_report(const ScenarioConfig& cfg, const ProtocolReport& report) {
  json doc;
  doc["protocol"] = report.protocol;

  json echo;
  echo["protocol"] = cfg.protocol;
  echo["a"] = json_number(cfg.a);
  echo["b"] = json_number(cfg.b);
  echo["alpha"] = json_number(cfg.alpha.value_or(2.0));
  if (cfg.beta) echo["beta"] = json_number(*cfg.beta);
  if (cfg.gamma) echo["gamma"] = json_number(*cfg.gamma);
  echo["delta-width"] = json_number(cfg.delta_width);
  echo["n-pairs"] = cfg.n_pairs;
  echo["mode"] = cfg.mode;
  echo["postselect"] = cfg.postselect;
  echo["n-max"] = cfg.n_max;
  echo["delta-ratio"] = json_number(cfg.delta_ratio);
  if (!cfg.outcomes.empty()) echo["outcomes"] = cfg.outcomes;
  doc["config"] = echo;

  json branches = json::array();
  for (const auto& b : report.branches) {
    json jb;
    jb["label"] = b.label;
    jb["probability"] = json_number(b.probability);
    jb["kept"] = b.kept;
    if (b.vne_bits) jb["vne_bits"] = json_number(*b.vne_bits);
    if (b.fidelity) jb["fidelity"] = json_number(*b.fidelity);
    if (b.purity) jb["purity"] = json_number(*b.purity);
    branches.push_back(jb);
  }
  doc["branches"] = branches;

  json diag = json::object();
  for (const auto& [key, value] : report.diagnostics) diag[key] = json_number(value);
  doc["diagnostics"] = diag;
  doc["kept_probability"] = json_number(report.kept_probability());
  doc["discarded_probability"] = json_number(report.discarded_probability());
  return doc.dump(2) + "\n";
}

namespace {

ScenarioConfig apply_sweep_value(ScenarioConfig cfg, const std::string& parameter, double value) {
  if (parameter == "alpha")
    cfg.alpha = value;
  else if (parameter == "beta")
    cfg.beta = value;
  else if (parameter == "gamma")
    cfg.gamma = value;
  else if (parameter == "delta-width")
    cfg.delta_width = value;
  else
    throw ConfigError("parameter '" + parameter + "' is not sweepable");
  return cfg;
}

void check_sweepable(const ScenarioConfig& cfg, const std::string& parameter) {
  const std::string& p = cfg.protocol;
  bool ok = false;
  if (parameter == "alpha") ok = p != "transfer-qubit-to-qubit";
  if (parameter == "beta") ok = p == "reciprocation" || p == "entanglement-transfer";
  if (parameter == "gamma") ok = p == "entanglement-transfer";
  if (parameter == "delta-width") ok = p == "reciprocation";
  if (!ok)
    throw ConfigError("parameter '" + parameter + "' is not sweepable for protocol '" + p + "'");
}

}  // namespace

std::string run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec) {
  if (spec.points < 0) throw ConfigError("sweep points must be non-negative");
  check_sweepable(cfg, spec.parameter);

  std::vector<double> grid(spec.points);
  for (int i = 0; i < spec.points; ++i)
    grid[i] = spec.points == 1
                  ? spec.start
                  : spec.start + (spec.stop - spec.start) * i / (spec.points - 1);

  // Grid points evaluate concurrently; rows are gathered in grid order.
  std::vector<std::future<ProtocolReport>> futures;
  futures.reserve(grid.size());
  for (double value : grid) {
    ScenarioConfig point = apply_sweep_value(cfg, spec.parameter, value);
    futures.push_back(std::async(std::launch::async,
                                 [point = std::move(point)] { return run_protocol(point); }));
  }

  std::ostringstream csv;
  bool header_done = false;
  for (size_t i = 0; i < futures.size(); ++i) {
    const ProtocolReport rep = futures[i].get();
    if (!header_done) {
      csv << csv_field(spec.parameter);
      for (const auto& b : rep.branches) {
        csv << ',' << csv_field("probability[" + b.label + "]");
        if (b.vne_bits) csv << ',' << csv_field("vne_bits[" + b.label + "]");
        if (b.fidelity) csv << ',' << csv_field("fidelity[" + b.label + "]");
        if (b.purity) csv << ',' << csv_field("purity[" + b.label + "]");
      }
      for (const auto& [key, value] : rep.diagnostics) csv << ',' << csv_field(key);
      csv << '\n';
      header_done = true;
    }
    csv << format_number(grid[i]);
    for (const auto& b : rep.branches) {
      csv << ',' << format_number(b.probability);
      if (b.vne_bits) csv << ',' << format_number(*b.vne_bits);
      if (b.fidelity) csv << ',' << format_number(*b.fidelity);
      if (b.purity) csv << ',' << format_number(*b.purity);
    }
    for (const auto& [key, value] : rep.diagnostics) csv << ',' << format_number(value);
    csv << '\n';
  }
  if (!header_done) csv << csv_field(spec.parameter) << '\n';  // empty grid: header only
  return csv.str();
}

namespace {

void write_output(const std::string& path, const std::string& payload, std::ostream& fallback) {
  if (path.empty()) {
    fallback << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << payload;
}

void warn_on_validity(const ProtocolReport& rep, std::ostream& err) {
  const auto it = rep.diagnostics.find("validity_pass");
  if (it != rep.diagnostics.end() && it->second == 0.0)
    err << "warning: dispersive validity ratios below threshold "
           "(see diagnostics validity_r1, validity_r2)\n";
}

}  // namespace

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid atom-cavity cross-Kerr protocol simulator"};
  app.require_subcommand(1);

  ScenarioConfig flags;
  std::string config_path;
  SweepSpec sweep_spec;
  bool alpha_set = false, beta_set = false, gamma_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its fields");
    cmd->add_option("--protocol", flags.protocol, "protocol name (see 'list')");
    cmd->add_option("--a", flags.a, "input qubit amplitude on |0>");
    cmd->add_option("--b", flags.b, "input qubit amplitude on |1>");
    cmd->add_option("--alpha", flags.alpha, "coherent amplitude alpha")
        ->each([&](const std::string&) { alpha_set = true; });
    cmd->add_option("--beta", flags.beta, "coherent amplitude beta (defaults to alpha)")
        ->each([&](const std::string&) { beta_set = true; });
    cmd->add_option("--gamma", flags.gamma,
                    "post-interaction component amplitude gamma = i alpha (entanglement-transfer)")
        ->each([&](const std::string&) { gamma_set = true; });
    cmd->add_option("--delta-width", flags.delta_width, "Gaussian measurement width Delta");
    cmd->add_option("--n-pairs", flags.n_pairs, "number of atomic pairs (multipair protocols)");
    cmd->add_option("--mode", flags.mode, "measurement mode: ideal | gaussian");
    cmd->add_flag("--postselect", flags.postselect, "keep only the postselected branch");
    cmd->add_option("--n-max", flags.n_max, "Fock truncation override (waives the guard)");
    cmd->add_option("--delta-ratio", flags.delta_ratio,
                    "delta/lambda ratio for the validity diagnostic");
    cmd->add_option("--outcomes", flags.outcomes, "multipair outcome string (2n of +/-)");
    cmd->add_option("--out", flags.out, "output file (stdout when omitted)");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "execute one protocol, emit a JSON result");
  add_common(cmd_run);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep one parameter, emit CSV");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--sweep-param", sweep_spec.parameter, "parameter to sweep")->required();
  cmd_sweep->add_option("--sweep-start", sweep_spec.start, "grid start")->required();
  cmd_sweep->add_option("--sweep-stop", sweep_spec.stop, "grid stop")->required();
  cmd_sweep->add_option("--sweep-points", sweep_spec.points, "grid point count")->required();
  CLI::App* cmd_validate = app.add_subcommand("validate", "validate the config and exit");
  add_common(cmd_validate);
  CLI::App* cmd_list = app.add_subcommand("list", "enumerate protocols");

  std::vector<std::string> argv_like = args;
  argv_like.insert(argv_like.begin(), "ckqed");
  std::vector<const char*> argv;
  argv.reserve(argv_like.size());
  for (const auto& s : argv_like) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_list->parsed()) {
      for (const auto& name : kProtocolNames) out << name << "\n";
      return 0;
    }

    // Config file first, then explicit flags on top.
    ScenarioConfig cfg = flags;
    if (!config_path.empty()) {
      ScenarioConfig base = load_config_file(config_path);
      CLI::App* active = cmd_run->parsed() ? cmd_run
                         : cmd_sweep->parsed() ? cmd_sweep
                                               : cmd_validate;
      auto overridden = [&](const std::string& flag) {
        return active->count(flag) > 0;
      };
      if (!overridden("--protocol")) cfg.protocol = base.protocol;
      if (!overridden("--a")) cfg.a = base.a;
      if (!overridden("--b")) cfg.b = base.b;
      if (!alpha_set && base.alpha) cfg.alpha = base.alpha;
      if (!beta_set && base.beta) cfg.beta = base.beta;
      if (!gamma_set && base.gamma) cfg.gamma = base.gamma;
      if (!overridden("--delta-width")) cfg.delta_width = base.delta_width;
      if (!overridden("--n-pairs")) cfg.n_pairs = base.n_pairs;
      if (!overridden("--mode")) cfg.mode = base.mode;
      if (!overridden("--postselect") && base.postselect) cfg.postselect = true;
      if (!overridden("--n-max")) cfg.n_max = base.n_max;
      if (!overridden("--delta-ratio")) cfg.delta_ratio = base.delta_ratio;
      if (!overridden("--outcomes") && !base.outcomes.empty()) cfg.outcomes = base.outcomes;
      if (!overridden("--out") && !base.out.empty()) cfg.out = base.out;
    }

    if (cmd_validate->parsed()) {
      validate_config(cfg);
      out << "config ok\n";
      return 0;
    }
    if (cmd_run->parsed()) {
      const ProtocolReport rep = run_protocol(cfg);
      warn_on_validity(rep, err);
      write_output(cfg.out, serialize_report(cfg, rep), out);
      return 0;
    }
    if (cmd_sweep->parsed()) {
      validate_config(cfg);
      write_output(cfg.out, run_sweep(cfg, sweep_spec), out);
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "precondition failure: " << e.what() << "\n";
    return 3;
  } catch (const ToleranceError& e) {
    err << "tolerance failure: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

}  // namespace ckqed::cli
