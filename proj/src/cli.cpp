#include "mereo/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mereo/engine.hpp"
#include "mereo/finmodel.hpp"
#include "mereo/formula.hpp"
#include "mereo/generate.hpp"
#include "mereo/hfsets.hpp"

namespace mereo::cli {

using Json = nlohmann::ordered_json;

std::optional<Command> parse_command(std::string_view name) {
  if (name == "decide") return Command::Decide;
  if (name == "eliminate") return Command::Eliminate;
  if (name == "oracle-compare") return Command::OracleCompare;
  if (name == "hf-verify") return Command::HfVerify;
  return std::nullopt;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Decide: return "decide";
    case Command::Eliminate: return "eliminate";
    case Command::OracleCompare: return "oracle-compare";
    case Command::HfVerify: return "hf-verify";
  }
  return "";
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  return std::nullopt;
}

std::string resolve_input(const std::string& arg, std::istream& stdin_stream) {
  std::ostringstream buf;
  if (arg == "-") {
    buf << stdin_stream.rdbuf();
    return buf.str();
  }
  if (!arg.empty() && arg.front() == '@') {
    const std::string path = arg.substr(1);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read input file '" + path + "'");
    buf << in.rdbuf();
    return buf.str();
  }
  return arg;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Json trace_json(const engine::EliminationTrace& trace) {
  Json stages = Json::array();
  for (const auto& step : trace) {
    stages.push_back(Json{{"stage", step.stage}, {"before", render(step.before)}, {"after", render(step.after)}});
  }
  return stages;
}

void trace_text(const engine::EliminationTrace& trace, std::string& out) {
  for (const auto& step : trace) {
    out += "[" + step.stage + "]\n";
    out += "  before: " + render(step.before) + "\n";
    out += "  after:  " + render(step.after) + "\n";
  }
}

Json envelope(Command c) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = std::string(command_name(c));
  return j;
}

Format format_for(const RunConfig& config) {
  if (config.format) return *config.format;
  return config.command == Command::Decide || config.command == Command::Eliminate ? Format::Text : Format::Json;
}

engine::Options engine_options(const RunConfig& config, bool trace) {
  engine::Options o;
  o.node_budget = static_cast<std::size_t>(config.budget);
  o.record_trace = trace;
  return o;
}

RunResult decide_cmd(const RunConfig& config, std::string_view input) {
  const auto start = Clock::now();
  const Formula f = parse(input);
  const engine::Decision d = engine::decide(f, engine_options(config, config.trace));
  RunResult r;
  r.exit_code = d.verdict ? kExitTrue : kExitFalse;
  if (format_for(config) == Format::Json) {
    Json j = envelope(config.command);
    j["sentence"] = render(f);
    j["verdict"] = d.verdict;
    j["stages"] = config.trace ? trace_json(d.trace) : Json::array();
    j["elapsed_ms"] = elapsed_ms(start);
    r.out = j.dump(2) + "\n";
  } else {
    if (config.trace) trace_text(d.trace, r.out);
    r.out += d.verdict ? "true\n" : "false\n";
  }
  return r;
}

RunResult eliminate_cmd(const RunConfig& config, std::string_view input) {
  const auto start = Clock::now();
  const Formula f = parse(input);
  engine::EliminationTrace trace;
  const Formula g = engine::eliminate(f, engine_options(config, config.trace), config.trace ? &trace : nullptr);
  RunResult r;
  r.exit_code = kExitOk;
  if (format_for(config) == Format::Json) {
    Json j = envelope(config.command);
    j["formula"] = render(f);
    j["result"] = render(g);
    j["stages"] = trace_json(trace);
    j["elapsed_ms"] = elapsed_ms(start);
    r.out = j.dump(2) + "\n";
  } else {
    trace_text(trace, r.out);
    r.out += render(g) + "\n";
  }
  return r;
}

Json assignment_json(const finmodel::Assignment& a) {
  Json j = Json::object();
  for (const auto& [name, set] : a) j[name] = set.elements();
  return j;
}

RunResult oracle_cmd(const RunConfig& config) {
  const auto start = Clock::now();
  gen::Generator generator(config.seed);
  Json failures = Json::array();
  Json exhausted = Json::array();
  for (std::uint64_t i = 0; i < config.count; ++i) {
    const Formula f = generator.open_formula();
    Formula g;
    try {
      g = engine::eliminate(f, engine_options(config, false));
    } catch (const engine::BudgetExceeded&) {
      exhausted.push_back(Json{{"index", i}, {"formula", render(f)}});
      continue;
    }
    auto ce = finmodel::check_equivalence(f, g, config.samples, config.universe_size, config.seed + i);
    if (ce) {
      failures.push_back(Json{{"index", i},
                              {"formula", render(f)},
                              {"eliminated", render(g)},
                              {"assignment", assignment_json(ce->assignment)},
                              {"formula_value", ce->lhs_value},
                              {"eliminated_value", ce->rhs_value}});
    }
  }
  RunResult r;
  r.exit_code = !failures.empty() ? kExitCheckFailed : !exhausted.empty() ? kExitBudget : kExitOk;
  const char* verdict = r.exit_code == kExitOk ? "pass" : "fail";
  if (format_for(config) == Format::Json) {
    Json j = envelope(config.command);
    j["seed"] = config.seed;
    j["count"] = config.count;
    j["universe_size"] = config.universe_size;
    j["samples_per_formula"] = config.samples;
    j["failures"] = failures;
    j["budget_exceeded"] = exhausted;
    j["verdict"] = verdict;
    j["elapsed_ms"] = elapsed_ms(start);
    r.out = j.dump(2) + "\n";
  } else {
    r.out = "oracle-compare: " + std::to_string(config.count) + " formulas, " + std::to_string(failures.size()) +
            " disagreements, " + std::to_string(exhausted.size()) + " over budget: " + verdict + "\n";
    for (const auto& f : failures) {
      r.out += "  #" + f["index"].dump() + " " + f["formula"].get<std::string>() + "\n    eliminated: " +
               f["eliminated"].get<std::string>() + "\n    assignment: " + f["assignment"].dump() + "\n";
    }
  }
  if (!exhausted.empty()) r.err = "budget exceeded on " + std::to_string(exhausted.size()) + " formulas\n";
  return r;
}

RunResult hf_cmd(const RunConfig& config) {
  const auto start = Clock::now();
  const hf::HfSet z = hf::parse_hf(config.z_spec);
  const std::size_t n = static_cast<std::size_t>(config.max_rank);
  hf::check_universe_for(n, z);
  const hf::Sampling sampling{config.budget, config.seed};
  std::vector<hf::Report> reports;
  reports.push_back(hf::verify_same_inclusion(n, z, sampling));
  reports.push_back(hf::verify_automorphism(n, z, sampling));
  reports.push_back(hf::verify_automorphism(n, z, sampling, true));
  reports.push_back(hf::verify_eta(n, z, n - 1));
  reports.push_back(hf::verify_singleton_interdef(n, sampling));

  bool all = true;
  for (const auto& rep : reports) all = all && rep.pass;
  RunResult r;
  r.exit_code = all ? kExitOk : kExitCheckFailed;
  if (format_for(config) == Format::Json) {
    Json j = envelope(config.command);
    j["max_rank"] = config.max_rank;
    j["z"] = hf::render(z);
    j["seed"] = config.seed;
    Json list = Json::array();
    for (const auto& rep : reports) list.push_back(rep.to_json());
    j["reports"] = list;
    j["verdict"] = all ? "pass" : "fail";
    j["elapsed_ms"] = elapsed_ms(start);
    r.out = j.dump(2) + "\n";
  } else {
    for (const auto& rep : reports) {
      r.out += rep.check + "  rank " + std::to_string(rep.universe_rank) + "  z=" + (rep.z.empty() ? "-" : rep.z) +
               "  pairs " + std::to_string(rep.pairs_checked) + (rep.exhaustive ? "" : " (sampled)") + "  " +
               (rep.pass ? "pass" : "FAIL") + "\n";
      if (rep.counterexample) r.out += "  counterexample: " + rep.counterexample->dump() + "\n";
    }
  }
  return r;
}

RunResult fail(int code, const std::string& message) {
  RunResult r;
  r.exit_code = code;
  r.err = message + "\n";
  return r;
}

}  // namespace

RunResult run(const RunConfig& config, std::string_view input) {
  if (config.budget < 1) return fail(kExitUsage, "error: --budget must be at least 1");
  if (config.max_rank > hf::kMaxUniverseRank)
    return fail(kExitUsage, "error: --max-rank must be at most " + std::to_string(hf::kMaxUniverseRank));
  try {
    switch (config.command) {
      case Command::Decide: return decide_cmd(config, input);
      case Command::Eliminate: return eliminate_cmd(config, input);
      case Command::OracleCompare: return oracle_cmd(config);
      case Command::HfVerify: return hf_cmd(config);
    }
  } catch (const ParseError& e) {
    return fail(kExitUsage, std::string("syntax error: ") + e.what());
  } catch (const engine::NotASentence& e) {
    return fail(kExitUsage, std::string("error: ") + e.what());
  } catch (const engine::BudgetExceeded& e) {
    return fail(kExitBudget, std::string("budget exceeded: ") + e.what());
  } catch (const finmodel::EvaluationError& e) {
    // The oracle refused a search larger than it is willing to run.
    return fail(kExitBudget, std::string("oracle limit: ") + e.what());
  } catch (const hf::HfParseError& e) {
    return fail(kExitUsage, std::string("error: --z: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitUsage, std::string("error: ") + e.what());
  } catch (const std::exception& e) {
    return fail(kExitUsage, std::string("error: ") + e.what());
  }
  return fail(kExitUsage, "error: unknown command");
}

}  // namespace mereo::cli
