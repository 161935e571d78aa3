// vgadt: check, infer and cross-check variance annotations on datatype
// declarations.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vgadt/checker.hpp"
#include "vgadt/criterion.hpp"
#include "vgadt/oracle.hpp"
#include "vgadt/parser.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace vgadt;

enum class Format { Text, Structured };

struct RunConfig {
  std::vector<std::string> inputs;
  std::string preset = "atomic";
  std::string mode = "exact";
  std::string format = "text";
  int depth = 2;
  bool explain = false;
  std::string query;
  std::string query_variance = "+";
};

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kInputError = 2;

json context_json(const VarianceContext& g) {
  json out = json::object();
  for (const auto& [var, v] : g) out[var] = std::string(1, to_char(v));
  return out;
}

json sets_json(const VarianceSetMap& m) {
  json out = json::object();
  for (const auto& [var, s] : m.entries()) {
    json members = json::array();
    for (Variance v : s.members()) members.push_back(std::string(1, to_char(v)));
    out[var] = members;
  }
  return out;
}

// Reads, parses and flags one file. Prints diagnostics to stderr.
std::optional<Signature> load(const std::string& path, ClosurePreset preset) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << path << ": cannot read file\n";
    return std::nullopt;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  auto parsed = parse_signature(buf.str());
  for (const auto& d : parsed.diagnostics) std::cerr << path << ":" << d.str() << "\n";
  if (!parsed.ok()) return std::nullopt;
  Signature sig = std::move(*parsed.signature);
  auto diags = apply_preset(sig, preset);
  for (const auto& d : diags) std::cerr << path << ":" << d.str() << "\n";
  if (!diags.empty()) return std::nullopt;
  return sig;
}

const DataConstructorDecl& ctor_of(const Signature& sig, const Verdict& v) {
  const auto* d = sig.datatype(v.type);
  for (const auto& k : d->ctors)
    if (k.name == v.ctor) return k;
  throw std::logic_error("verdict for unknown constructor " + v.ctor);
}

int run_check(const RunConfig& cfg, ClosurePreset preset, Mode mode, Format fmt) {
  int status = kOk;
  bool any_rejected = false;
  for (const auto& path : cfg.inputs) {
    auto sig = load(path, preset);
    if (!sig) {
      status = kInputError;
      continue;
    }
    auto report = check_signature(*sig, mode);
    for (const auto& v : report.verdicts) {
      any_rejected = any_rejected || !v.accepted;
      if (fmt == Format::Structured) {
        json rec;
        rec["type"] = v.type;
        rec["ctor"] = v.ctor;
        rec["verdict"] = v.accepted ? "accepted" : "rejected";
        rec["gamma"] = v.gamma ? context_json(*v.gamma) : json(nullptr);
        json gammas = json::array();
        for (const auto& g : v.gammas) gammas.push_back(context_json(g));
        rec["gammas"] = gammas;
        rec["reason"] = v.reason;
        rec["mode"] = std::string(to_string(v.mode));
        rec["failing_constraint"] = v.failing_constraint ? json(*v.failing_constraint + 1) : json(nullptr);
        rec["empty_vars"] = v.empty_vars;
        std::cout << rec.dump() << "\n";
      } else {
        std::cout << v.type << "." << v.ctor << ": " << (v.accepted ? "accepted" : "rejected");
        if (v.accepted && v.gamma) {
          std::cout << "  gamma " << v.gamma->str();
          if (!v.gammas.empty()) {
            std::cout << "  gammas";
            for (const auto& g : v.gammas) std::cout << " " << g.str();
          }
        }
        if (!v.accepted) std::cout << "  " << v.reason;
        std::cout << "\n";
      }
      if (cfg.explain && fmt == Format::Text) {
        const auto* d = sig->datatype(v.type);
        std::istringstream lines(explain_verdict(*sig, *d, ctor_of(*sig, v), v));
        for (std::string line; std::getline(lines, line);) std::cout << "    " << line << "\n";
      }
    }
  }
  if (any_rejected && fmt == Format::Text) std::cout << "note: " << kIncompletenessNote << "\n";
  if (status != kOk) return status;
  return any_rejected ? kRejected : kOk;
}

int run_infer(const RunConfig& cfg, ClosurePreset preset, Format fmt) {
  int status = kOk;
  std::optional<Variance> qv;
  if (cfg.query_variance.size() == 1) qv = variance_from_char(cfg.query_variance[0]);
  if (!qv) {
    std::cerr << "--variance expects one of + - = ~\n";
    return kInputError;
  }
  for (const auto& path : cfg.inputs) {
    auto sig = load(path, preset);
    if (!sig) {
      status = kInputError;
      continue;
    }
    if (!cfg.query.empty()) {
      TypeExpr t;
      try {
        t = parse_type(cfg.query);
      } catch (const ParseError& e) {
        std::cerr << "--type: " << e.what() << "\n";
        return kInputError;
      }
      if (auto problems = check_type(*sig, t); !problems.empty()) {
        std::cerr << "--type: " << problems.front() << "\n";
        return kInputError;
      }
      auto sets = variance_sets(*sig, t, *qv);
      if (fmt == Format::Structured) {
        json rec;
        rec["query"] = t.str();
        rec["variance"] = std::string(1, to_char(*qv));
        rec["principal"] = context_json(principal_context(*sig, t, *qv));
        rec["sets"] = sets_json(sets);
        std::cout << rec.dump() << "\n";
      } else {
        std::cout << sets.str() << "\n";
      }
      continue;
    }
    for (const auto& d : sig->datatypes()) {
      for (const auto& k : d.ctors) {
        auto adt = k.form == ConstructorForm::Adt ? adt_argument(d, k) : std::nullopt;
        const TypeExpr& arg = adt ? *adt : k.arg;
        auto domain = adt ? d.param_vars() : k.existentials;
        auto sets = variance_sets(*sig, arg, Variance::Cov, domain);
        json constraints = json::array();
        std::vector<std::string> lines;
        if (!adt) {
          for (std::size_t i = 0; i < k.constraints.size(); ++i) {
            const auto& c = k.constraints[i];
            Variance v = d.params[c.param].variance, tgt = target_variance(c.rel);
            auto ds = decomp_sets(*sig, c.bound, v, tgt, domain);
            std::string head = "constraint " + std::to_string(i + 1) + " (" + constraint_text(d, c) +
                               ") at " + to_char(v) + " => " + to_char(tgt) + ": ";
            lines.push_back(head + (ds ? ds->str() : std::string("not decomposable")));
            json rec;
            rec["constraint"] = constraint_text(d, c);
            rec["sets"] = ds ? sets_json(*ds) : json(nullptr);
            constraints.push_back(rec);
          }
        }
        if (fmt == Format::Structured) {
          json rec;
          rec["type"] = d.name;
          rec["ctor"] = k.name;
          rec["argument"] = arg.str();
          rec["sets"] = sets_json(sets);
          rec["constraints"] = constraints;
          std::cout << rec.dump() << "\n";
        } else {
          std::cout << d.name << "." << k.name << "  " << arg.str() << " : +\n  " << sets.str() << "\n";
          for (const auto& l : lines) std::cout << "  " << l << "\n";
        }
      }
    }
  }
  return status;
}

int run_oracle(const RunConfig& cfg, ClosurePreset preset, Format fmt) {
  int status = kOk;
  bool disagree = false;
  for (const auto& path : cfg.inputs) {
    auto sig = load(path, preset);
    if (!sig) {
      status = kInputError;
      continue;
    }
    TypeStore store(*sig);
    GroundUniverse u;
    try {
      u = enumerate_types(store, cfg.depth);
    } catch (const std::length_error& e) {
      std::cerr << path << ": " << e.what() << "\n";
      status = kInputError;
      continue;
    }
    if (fmt == Format::Text)
      std::cout << path << ": universe of depth " << u.depth << " with " << u.size() << " types\n";

    for (const auto& tc : sig->constructors()) {
      if (tc.name == kUnit) continue;
      for (Variance v : {Variance::Cov, Variance::Contra}) {
        if (!is_closed(*sig, tc.name, v)) continue;
        auto sem = sem_closed(store, u, tc.name, v);
        if (sem) continue;
        disagree = true;
        if (fmt == Format::Structured) {
          json rec;
          rec["closure"] = tc.name;
          rec["flag"] = std::string(1, to_char(v));
          rec["agreement"] = "disagree";
          rec["counterexample"] = sem.counterexample;
          std::cout << rec.dump() << "\n";
        } else {
          std::cout << "closure flag " << to_char(v) << " on " << tc.name << " is refuted: "
                    << sem.counterexample << "\n";
        }
      }
    }

    for (const auto& d : sig->datatypes()) {
      for (const auto& k : d.ctors) {
        Verdict v = check_constructor(*sig, d, k, Mode::Exact);
        OracleVerdict sem = req_sp(store, u, d, k);
        bool eq_only = std::all_of(k.constraints.begin(), k.constraints.end(),
                                   [](const Constraint& c) { return c.rel == ConstraintRel::Eq; });
        std::string agreement;
        if (v.accepted == sem.holds)
          agreement = "agree";
        else if (v.accepted)
          agreement = "disagree";
        else if (eq_only && preset == ClosurePreset::Atomic)
          agreement = "disagree";
        else
          agreement = "inconclusive";
        if (agreement == "disagree") disagree = true;
        if (fmt == Format::Structured) {
          json rec;
          rec["type"] = d.name;
          rec["ctor"] = k.name;
          rec["verdict"] = v.accepted ? "accepted" : "rejected";
          rec["req_sp"] = sem.holds ? "holds" : "fails";
          rec["depth"] = sem.depth;
          rec["agreement"] = agreement;
          rec["counterexample"] = sem.holds ? json(nullptr) : json(sem.counterexample);
          std::cout << rec.dump() << "\n";
        } else {
          std::cout << d.name << "." << k.name << ": " << (v.accepted ? "accepted" : "rejected")
                    << ", req-SP " << sem.label() << ": " << agreement << "\n";
          if (!sem.holds) std::cout << "    " << sem.counterexample << "\n";
        }
      }
    }

    auto sp = check_sp_requirements(store, u);
    if (fmt == Format::Structured) {
      json rec;
      rec["requirements"] = sp.holds() ? "hold" : "violated";
      rec["depth"] = sp.depth;
      rec["violations"] = sp.violations;
      std::cout << rec.dump() << "\n";
    } else {
      std::cout << "subtyping requirements " << (sp.holds() ? "hold" : "violated") << " at depth "
                << sp.depth << "\n";
      for (const auto& line : sp.violations) std::cout << "    " << line << "\n";
    }
  }
  if (status != kOk) return status;
  return disagree ? kRejected : kOk;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("files", cfg.inputs, "Declaration files")->required()->check(CLI::ExistingFile);
  cmd->add_option("--preset", cfg.preset, "Closure preset")
      ->check(CLI::IsMember({"atomic", "ml-open", "none"}))
      ->capture_default_str();
  cmd->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance checker for algebraic and generalized algebraic datatypes"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* check = app.add_subcommand("check", "Check every constructor of the given files");
  add_common(check, cfg);
  check->add_option("--mode", cfg.mode, "Decision procedure")
      ->check(CLI::IsMember({"fast", "exact"}))
      ->capture_default_str();
  check->add_flag("--explain", cfg.explain, "Print derivations behind each verdict");

  auto* infer = app.add_subcommand("infer", "Print variance sets per constructor or for --type");
  add_common(infer, cfg);
  infer->add_option("--type", cfg.query, "A type expression to query instead");
  infer->add_option("--variance", cfg.query_variance, "Variance for --type")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Cross-check verdicts against bounded semantics");
  add_common(oracle, cfg);
  oracle->add_option("--depth", cfg.depth, "Universe depth")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  ClosurePreset preset = *preset_from_string(cfg.preset);
  Format fmt = cfg.format == "structured" ? Format::Structured : Format::Text;
  try {
    if (check->parsed()) return run_check(cfg, preset, *mode_from_string(cfg.mode), fmt);
    if (infer->parsed()) return run_infer(cfg, preset, fmt);
    return run_oracle(cfg, preset, fmt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
