#include "smce/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "smce/api_service.hpp"
#include "smce/catalog_store.hpp"
#include "smce/enforcement.hpp"
#include "smce/errors.hpp"
#include "smce/oracle.hpp"
#include "smce/rule_catalog.hpp"
#include "smce/semantics.hpp"

namespace smce {

using nlohmann::json;

namespace {

struct Options {
  bool json_out = false;
  bool timestamps = false;

  std::string flags;
  std::optional<std::int64_t> code;
  bool compound = false;

  std::string out_dir = ".";
  std::string instance;
  std::string instance_file;

  std::string data_dir;
  std::string db;
  std::string mapping;
  std::string flag;
  bool on = false;
  bool off = false;

  int n = 4;
  std::string id;
  bool verbose = false;

  std::optional<int> port;
  std::optional<std::string> serve_data;
  std::optional<std::string> ui;
  std::string host = "127.0.0.1";

  bool catalog = false;
};

std::string now_iso() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string note_text(const std::optional<std::string>& note) {
  if (!note || note->empty()) return "";
  const auto& c = find_corollary(*note);
  return c.id + " " + c.description;
}

int cmd_gen_catalog(const Options& o, std::ostream& out) {
  const auto& cat = default_catalog();
  std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, void (*fn)(std::ostream&, const RuleCatalog&)) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + (dir / name).string());
    fn(f, cat);
  };
  write("corollaries.csv", write_corollaries_csv);
  write("smccoherencies.csv", write_coherencies_csv);
  write("smcredundancies.csv", write_redundancies_csv);
  std::size_t incoherent = 0;
  for (const auto& r : cat.coherence_rows()) incoherent += r.coherent ? 0 : 1;
  json j = {{"enumerated", cat.enumerated()},
            {"stored", cat.coherence_rows().size()},
            {"incoherent", incoherent},
            {"redundancies", cat.redundancy_rows().size()},
            {"additional", cat.additional_rows().size()},
            {"corollaries", cat.corollaries().size()}};
  if (o.json_out) {
    out << j.dump(2) << '\n';
  } else {
    for (const char* k : {"enumerated", "stored", "incoherent", "redundancies", "additional", "corollaries"})
      out << k << ' ' << j[k].get<std::size_t>() << '\n';
  }
  return kExitOk;
}

int cmd_verdict(const Options& o, std::ostream& out) {
  ConstraintFlags f = o.code ? decode(*o.code) : parse_flags(o.flags);
  auto v = lookup(default_catalog(), encode(f), o.compound ? Compoundness::Compound : Compoundness::Single);
  if (o.json_out) {
    auto j = verdict_to_json(v);
    j["code"] = encode(f).value;
    j["flags"] = format_flags(f);
    out << j.dump(2) << '\n';
  } else if (v.kind == VerdictKind::Coherent) {
    out << "coherent\n";
    for (const auto& r : v.redundant) out << "  redundant " << abbreviation(r.flag) << ": " << note_text(r.note) << '\n';
    for (const auto& r : v.additional)
      out << "  also implies " << abbreviation(r.flag) << ": " << note_text(r.note) << '\n';
  } else {
    out << to_string(v.kind) << ": " << note_text(v.note) << '\n';
  }
  return v.kind == VerdictKind::Coherent ? kExitOk : kExitRejected;
}

MappingInstance read_instance(const Options& o) {
  if (!o.instance.empty()) return parse_inline_instance(o.instance);
  std::ifstream f(o.instance_file, std::ios::binary);
  if (!f) throw ArgumentError("cannot read " + o.instance_file);
  try {
    return instance_from_json(json::parse(f));
  } catch (const json::parse_error& e) {
    throw ParseError(o.instance_file + ": " + e.what());
  }
}

int cmd_check(const Options& o, std::ostream& out) {
  if (o.instance.empty() == o.instance_file.empty())
    throw ArgumentError("exactly one of --instance or --instance-file is required");
  auto f = parse_flags(o.flags);
  auto inst = read_instance(o);
  auto bad = violations(inst, f);
  if (o.json_out) {
    json vs = json::array();
    for (auto t : bad.members()) vs.push_back(std::string(abbreviation(t)));
    out << json{{"flags", format_flags(f)}, {"satisfied", bad.empty()}, {"violations", vs}}.dump(2) << '\n';
  } else if (bad.empty()) {
    out << "satisfied\n";
  } else {
    out << "violated: " << format_flags(bad) << '\n';
  }
  return bad.empty() ? kExitOk : kExitRejected;
}

std::string state_line(const ConstraintState& s) {
  std::string a, i;
  for (const auto& m : s.members) {
    auto& dst = m.provenance == Provenance::Asserted ? a : i;
    dst += (dst.empty() ? "" : ",") + std::string(abbreviation(m.type));
  }
  return "{" + a + (i.empty() ? "" : "; implied " + i) + "}";
}

int cmd_toggle(const Options& o, std::ostream& out) {
  if (o.on == o.off) throw ArgumentError("exactly one of --on or --off is required");
  auto meta = load(o.data_dir);
  auto db = meta.find_database(o.db);
  if (!db) throw NotFoundError("unknown database " + o.db);
  auto id = meta.find_mapping(*db, o.mapping);
  if (!id) throw NotFoundError("unknown mapping " + o.mapping);
  auto r = toggle_constraint(meta, *id, parse_type(o.flag), o.on, default_catalog());
  if (r.accepted() && !r.noop) save(meta, o.data_dir);
  if (o.json_out) {
    json outcomes = json::array();
    for (const auto& x : r.outcomes) outcomes.push_back(outcome_to_json(x));
    out << json{{"status", std::string(to_string(r.status))},
                {"message", r.message},
                {"noop", r.noop},
                {"outcomes", outcomes},
                {"state", constraint_state_view(meta, *id)}}
               .dump(2)
        << '\n';
  } else if (!r.accepted()) {
    out << to_string(r.status) << ": " << r.message << '\n';
  } else {
    out << (r.noop ? "unchanged" : "Accepted") << (r.unchecked ? " (unchecked against data)" : "") << '\n';
    for (const auto& x : r.outcomes)
      out << "  " << meta.mapping(x.state.mapping).name << ' ' << state_line(meta.state(x.state.mapping)) << '\n';
  }
  return r.accepted() ? kExitOk : kExitRejected;
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<VerificationReport> reps;
  if (o.id.empty())
    reps = verify_all(o.n);
  else
    reps.push_back(verify_proposition(find_proposition(o.id), o.n));
  bool ok = true;
  json a = json::array();
  for (const auto& r : reps) {
    ok = ok && r.passed();
    if (o.json_out) {
      a.push_back(report_to_json(r));
      continue;
    }
    out << (r.passed() ? "PASS " : "FAIL ") << r.id << ": " << find_proposition(r.id).text() << " (" << r.checked
        << " instances";
    if (!r.passed())
      out << ", " << r.counterexamples.size() << " counterexamples, e.g. " << format_inline_instance(r.counterexamples[0]);
    out << ")\n";
  }
  if (o.json_out) out << a.dump(2) << '\n';
  return ok ? kExitOk : kExitRejected;
}

int cmd_audit(const Options& o, std::ostream& out) {
  auto r = audit_catalog(default_catalog(), o.n);
  if (o.json_out) {
    out << audit_to_json(r).dump(2) << '\n';
    return r.passed() ? kExitOk : kExitRejected;
  }
  out << (r.passed() ? "PASS" : "FAIL") << " audit n=" << r.n << ": " << r.combinations << " combinations, "
      << r.incoherent << " incoherent, " << r.no_model << " without models, " << r.policy_incoherent
      << " policy-incoherent, " << r.refutations.size() << " refuted; " << r.rules.size() << " rule checks, "
      << r.invalid_rules << " invalid\n";
  for (const auto& e : r.refutations)
    out << "  refuted " << format_flags(e.flags) << " [" << e.note.value_or("") << "] by "
        << format_inline_instance(*e.witness) << '\n';
  for (const auto& c : r.rules)
    if (c.counterexamples)
      out << "  invalid " << c.corollary << ": " << format_flags(c.premise) << " => " << abbreviation(c.conclusion)
          << " refuted by " << format_inline_instance(*c.witness) << '\n';
  if (o.verbose)
    for (const auto& e : r.policy) out << "  policy-incoherent " << format_flags(e.flags) << " [" << e.note.value_or("") << "]\n";
  return r.passed() ? kExitOk : kExitRejected;
}

int cmd_serve(const Options& o, std::ostream& out) {
  auto cfg = resolve_config(o.port, o.serve_data, o.ui);
  cfg.host = o.host;
  auto api = cfg.data_dir ? ApiService::open(*cfg.data_dir) : ApiService(Metacatalog{});
  out << "listening on " << cfg.host << ':' << cfg.port << std::endl;
  return serve(api, cfg);
}

int cmd_export(const Options& o, std::ostream& out) {
  if (o.catalog) {
    out << catalog_to_json(default_catalog()).dump(2) << '\n';
    return kExitOk;
  }
  auto meta = load(o.data_dir);
  if (o.db.empty()) {
    json a = json::object();
    for (const auto& [id, d] : meta.databases()) a[d.name] = database_to_json(meta, id);
    out << a.dump(2) << '\n';
    return kExitOk;
  }
  auto db = meta.find_database(o.db);
  if (!db) throw NotFoundError("unknown database " + o.db);
  out << database_to_json(meta, *db).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Self-map constraint set engine"};
  app.require_subcommand(1, 1);
  app.add_flag("--json", o.json_out, "Machine-readable output");
  app.add_flag("--timestamps", o.timestamps, "Prefix the report with the current time");

  auto* gen = app.add_subcommand("gen-catalog", "Write corollaries.csv, smccoherencies.csv, smcredundancies.csv");
  gen->add_option("--out", o.out_dir, "Output directory");

  auto* verdict = app.add_subcommand("verdict", "Catalog verdict for a flag set");
  auto* vf = verdict->add_option("--flags", o.flags, "Comma-separated abbreviations, e.g. SM,OT,T");
  verdict->add_option("--code", o.code, "Combination code x instead of --flags")->excludes(vf);
  verdict->add_flag("--compound", o.compound, "Evaluate as a compound mapping");

  auto* check = app.add_subcommand("check", "Check a flag set against an instance");
  check->add_option("--flags", o.flags)->required();
  check->add_option("--instance", o.instance, "Inline instance, e.g. 1>2,2>null");
  check->add_option("--instance-file", o.instance_file, "JSON instance file");

  auto* toggle = app.add_subcommand("toggle", "Add or remove a constraint in a stored metacatalog");
  toggle->add_option("--data-dir", o.data_dir)->required();
  toggle->add_option("--db", o.db)->required();
  toggle->add_option("--mapping", o.mapping)->required();
  toggle->add_option("--flag", o.flag)->required();
  toggle->add_flag("--on", o.on);
  toggle->add_flag("--off", o.off);

  auto* verify = app.add_subcommand("verify", "Check the propositions over every partial self-map");
  verify->add_option("--n", o.n, "Set size")->check(CLI::Range(0, 6));
  verify->add_option("--id", o.id, "A single proposition, e.g. P7.i");

  auto* audit = app.add_subcommand("audit", "Audit incoherence markings against finite models");
  audit->add_option("--n", o.n, "Set size")->check(CLI::Range(1, 6));
  audit->add_flag("--verbose", o.verbose, "List policy-incoherent combinations");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--port", o.port, "Port (env SMCE_PORT)");
  serve_cmd->add_option("--data-dir", o.serve_data, "Metacatalog directory (env SMCE_DATA)");
  serve_cmd->add_option("--ui", o.ui, "Static UI directory mounted at /ui");
  serve_cmd->add_option("--host", o.host);

  auto* exp = app.add_subcommand("export", "Print a stored metacatalog or the rule catalog as JSON");
  exp->add_option("--data-dir", o.data_dir);
  exp->add_option("--db", o.db);
  exp->add_flag("--catalog", o.catalog);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (o.timestamps) out << "# " << now_iso() << '\n';
    if (*gen) return cmd_gen_catalog(o, out);
    if (*verdict) {
      if (!o.code && vf->count() == 0) throw ArgumentError("--flags or --code is required");
      return cmd_verdict(o, out);
    }
    if (*check) return cmd_check(o, out);
    if (*toggle) return cmd_toggle(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*audit) return cmd_audit(o, out);
    if (*serve_cmd) return cmd_serve(o, out);
    if (*exp) {
      if (!o.catalog && o.data_dir.empty()) throw ArgumentError("--data-dir or --catalog is required");
      return cmd_export(o, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace smce
