#pragma once

// The `hurwitz` command line: invariant, table, signature, fuzz, moves.
// run_cli is callable in-process so tests can drive it with captured streams.

#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hurwitz/io.hpp"

#ifndef HURWITZ_DATA_DIR
#define HURWITZ_DATA_DIR "data"
#endif

namespace hurwitz {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitProduct = 3 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::string ring = "Z";
  bool ring_given = false;
  std::optional<int> genus;
  std::uint64_t seed = 1;
  bool json = false;
  std::string out;
  // tuple source
  std::string builtin, tuple_file, word;
  std::string sum, along = "id";
  // representation source
  std::string rep_file;
  std::optional<long> ell;
  std::size_t steps = 500;  // fuzz length
  std::size_t fuzz = 0;     // random moves applied before computing
  std::string script;
  std::size_t random = 0;
  std::string table_file = std::string(HURWITZ_DATA_DIR) + "/invariant_table.json";
};

namespace cli_detail {

inline HurwitzTuple resolve_tuple(const RunConfig& cfg) {
  int sources = !cfg.builtin.empty() + !cfg.tuple_file.empty() + !cfg.word.empty();
  if (sources != 1) throw UsageError("give exactly one of --builtin, --tuple-file, --word");
  HurwitzTuple t;
  if (!cfg.tuple_file.empty()) {
    t = tuple_from_json(read_json_file(cfg.tuple_file));
    if (cfg.genus && t.genus && *cfg.genus != *t.genus)
      throw UsageError("--genus " + std::to_string(*cfg.genus) + " contradicts the tuple file's genus " +
                       std::to_string(*t.genus));
    if (!t.genus) t.genus = cfg.genus;
  } else {
    if (!cfg.genus) throw UsageError("--genus is required with --builtin and --word");
    t = cfg.builtin.empty() ? tuple_from_word(parse_word(cfg.word), cfg.genus) : builtin_tuple(*cfg.genus, cfg.builtin);
  }
  if (!cfg.sum.empty()) {
    if (!t.genus) throw UsageError("--sum needs a genus");
    Word h = cfg.along == "id" ? Word{} : parse_word(cfg.along);
    t = fiber_sum(t, builtin_tuple(*t.genus, cfg.sum), h);
  }
  return t;
}

inline AnyRepresentation resolve_representation(const RunConfig& cfg, const HurwitzTuple& t) {
  if (!cfg.rep_file.empty()) {
    auto rep = load_representation(cfg.rep_file);
    auto name = std::visit([](const auto& r) { return r.ring().name(); }, rep);
    if (cfg.ring_given && RingDescriptor::parse(cfg.ring).name() != name)
      throw UsageError("--ring " + cfg.ring + " contradicts the representation file's ring " + name);
    return rep;
  }
  if (!t.genus) throw UsageError("the symplectic representation needs --genus");
  const int g = *t.genus;
  RingDescriptor d = RingDescriptor::parse(cfg.ring);
  switch (d.kind) {
    case RingKind::Integer: return symplectic_rep_z(g);
    case RingKind::Rational: return symplectic_rep(g, Rational{});
    case RingKind::IntegerModP: return symplectic_rep(g, ModP(0, d.prime));
    default:
      throw RingError("the symplectic representation is defined over Z, Q and Z/P, not " + d.name() +
                      "; use --rep-file");
  }
}

template <class T>
EvaluatedTuple<T> walked(const HurwitzTuple& t, const Representation<T>& rep, std::size_t steps, std::uint64_t seed) {
  auto ez = evaluate_tuple(t, rep);
  if (steps == 0) return ez;
  std::vector<std::string> letters;
  for (const auto& kv : rep.generators) letters.push_back(kv.first);
  MoveSampler sampler(seed, letters);
  for (std::size_t k = 0; k < steps; ++k) {
    auto s = sampler.next(ez.m());
    MoveSpec spec;
    spec.kind = s.global ? MoveSpec::Global : MoveSpec::Elementary;
    spec.index = s.index;
    spec.direction = s.direction;
    spec.conjugator = s.conjugator;
    ez = apply_move(ez, rep, spec);
  }
  return ez;
}

inline std::string describe(const HurwitzTuple& t, const RunConfig& cfg) {
  std::string s;
  if (!cfg.builtin.empty()) s = cfg.builtin;
  else if (!cfg.word.empty()) s = "word '" + cfg.word + "'";
  else s = cfg.tuple_file;
  if (!cfg.sum.empty()) s += " #" + cfg.along + " " + cfg.sum;
  if (t.genus) s += ", g=" + std::to_string(*t.genus);
  return s + ", m=" + std::to_string(t.size());
}

inline void emit(const RunConfig& cfg, std::ostream& os, const std::string& text) {
  if (cfg.out.empty()) {
    os << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw UsageError("cannot write '" + cfg.out + "'");
  f << text;
}

// ---------------------------------------------------------------------------
// invariant

template <class T>
int cmd_invariant(const RunConfig& cfg, const HurwitzTuple& t, const Representation<T>& rep, std::ostream& os) {
  if (!rep.has_psi()) throw UsageError("the representation has no psi; supply one in the representation file");
  InvariantOptions opt;
  opt.kernel_basis = false;
  if (cfg.ell) opt.ell = *cfg.ell;
  auto ez = walked(t, rep, cfg.fuzz, cfg.seed);
  auto r = compute_invariant(ez, rep, rep.psi, opt);
  std::optional<UnimodularityReport> cert;
  if constexpr (std::is_same_v<T, Integer>) {
    if (cfg.fuzz == 0 && rep.psi_symmetry == PsiSymmetry::Skew) cert = unimodularity_certificate(t, rep, r.W);
  }
  if (cfg.json) {
    json j = invariant_json(r, cert ? &*cert : nullptr);
    j["tuple"] = describe(t, cfg);
    emit(cfg, os, j.dump(2) + "\n");
    return kExitOk;
  }
  std::ostringstream o;
  o << "tuple:        " << describe(t, cfg) << (cfg.fuzz ? " after " + std::to_string(cfg.fuzz) + " random moves" : "")
    << "\n";
  o << "ring:         " << rep.ring().name() << "\n";
  o << "class:        " << r.form_class.class_string << "\n";
  if (r.form_class.genus_disclaimer)
    o << "              (definite even of rank >= 16: rank, signature and parity do not fix the class)\n";
  o << "kernel_rank:  " << r.kernel_rank << "\n";
  o << "mz_rank:      " << r.mz_rank << "\n";
  if (r.form_class.has_signature)
    o << "signature:    " << r.form_class.signature() << " (+" << r.form_class.positive << ", -"
      << r.form_class.negative << ")\n";
  o << "determinant:  " << r.determinant.str() << "\n";
  if (!r.quotient_torsion.empty()) {
    o << "torsion:     ";
    for (const auto& q : r.quotient_torsion) o << " " << q;
    o << "\n";
  }
  if (r.b1) o << "b1:           " << *r.b1 << "\n";
  if (r.type) {
    o << "type:         (" << r.type->first << "," << r.type->second << ")\n";
    if (r.form_class.has_signature)
      o << "sigma:        " << r.form_class.signature() + static_cast<long>(r.m) - static_cast<long>(r.type->first)
        << "\n";
  }
  if (r.predicted_mz)
    o << "rank formulas: mz " << *r.predicted_mz << ", kernel " << *r.predicted_kernel << " -> "
      << (r.rank_formulas_hold() ? "hold" : "FAIL") << "\n";
  if (cert) o << "unimodularity certificate: " << (cert->certified() ? "pass" : "FAIL") << "\n";
  if (!r.lemma_hypothesis) o << "note: product is " << r.product << "; kernel computed by " << r.kernel_method << "\n";
  emit(cfg, os, o.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// signature

inline int cmd_signature(const RunConfig& cfg, const HurwitzTuple& t, const Representation<Integer>& rep,
                         std::ostream& os) {
  auto ez = walked(t, rep, cfg.fuzz, cfg.seed);
  auto fs = fibration_signature(ez, rep);
  if (cfg.json) {
    emit(cfg, os, signature_json(fs).dump(2) + "\n");
  } else {
    std::ostringstream o;
    o << "tuple:        " << describe(t, cfg) << "\n";
    o << "sigma_meyer:  " << fs.sigma_meyer << "\n";
    o << "sigma_form:   " << fs.sigma_form << "\n";
    o << "agree:        " << (fs.agree ? "yes" : "NO") << "\n";
    o << "per_term:    ";
    for (long c : fs.per_term) o << " " << c;
    o << "\n";
    emit(cfg, os, o.str());
  }
  return fs.agree ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// fuzz

template <class T>
int cmd_fuzz(const RunConfig& cfg, const HurwitzTuple& t, const Representation<T>& rep, std::ostream& os) {
  if (!rep.has_psi()) throw UsageError("the representation has no psi; supply one in the representation file");
  if (cfg.steps < 1) throw UsageError("--steps must be at least 1");
  FuzzConfig<T> fc;
  fc.steps = cfg.steps;
  fc.seed = cfg.seed;
  auto rep_out = run_fuzz(t, rep, rep.psi, fc);
  if (cfg.json) {
    json j = fuzz_json(rep_out);
    j["tuple"] = describe(t, cfg);
    j["seed"] = cfg.seed;
    emit(cfg, os, j.dump(2) + "\n");
  } else {
    std::ostringstream o;
    o << "tuple:            " << describe(t, cfg) << "\n";
    o << "seed:             " << cfg.seed << "\n";
    o << "baseline class:   " << rep_out.baseline_class << "\n";
    o << "steps:            " << rep_out.steps << "\n";
    o << "product checks:   " << rep_out.product_checks << "\n";
    o << "invariant checks: " << rep_out.invariant_checks << "\n";
    o << "base-change checks: " << rep_out.base_change_checks << "\n";
    o << "failures:         " << rep_out.failures.size() << "\n";
    for (const auto& f : rep_out.failures) o << "  " << f << "\n";
    emit(cfg, os, o.str());
  }
  return rep_out.passed() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// moves

inline int cmd_moves(const RunConfig& cfg, const HurwitzTuple& t, std::ostream& os) {
  if (cfg.script.empty() && cfg.random == 0) throw UsageError("moves needs --script or --random");
  HurwitzTuple cur = t;
  if (!cfg.script.empty())
    for (const auto& s : moves_from_json(read_json_file(cfg.script))) cur = apply_move(cur, s);
  if (cfg.random) cur = random_walk(cur, cfg.random, cfg.seed);
  emit(cfg, os, tuple_json(cur).dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// table

struct TableRow {
  std::string name;
  int genus = 0;
  std::pair<std::size_t, std::size_t> type_expected;
  long sigma_expected = 0;
  std::string q_expected;
  // computed
  std::pair<std::size_t, std::size_t> type{};
  long sigma_meyer = 0, sigma_form = 0;
  std::string q;
  FormClass form;
  bool det_unit = false;
  bool type_ok = false, sigma_ok = false, q_ok = false;
  bool ok() const { return type_ok && sigma_ok && q_ok; }
};

inline std::vector<TableRow> table_rows(const RunConfig& cfg) {
  json data = read_json_file(cfg.table_file);
  std::vector<TableRow> rows;
  std::vector<json> specs;
  for (const auto& r : detail::require(data, "rows", "table file")) {
    if (!r.value("computable", false)) continue;
    int g = r.at("genus").get<int>();
    if (cfg.genus && *cfg.genus != g) continue;
    TableRow row;
    row.name = r.at("name").get<std::string>();
    row.genus = g;
    row.type_expected = {r.at("type")[0].get<std::size_t>(), r.at("type")[1].get<std::size_t>()};
    row.sigma_expected = r.at("sigma").get<long>();
    row.q_expected = r.at("q_omega").get<std::string>();
    rows.push_back(row);
    specs.push_back(r);
  }
  if (rows.empty()) throw UsageError("no table rows for the requested genus");
  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      const json& s = specs[i];
      TableRow& row = rows[i];
      HurwitzTuple t = builtin_tuple(row.genus, s.at("builtin").get<std::string>());
      if (s.contains("sum")) {
        std::string along = s.at("along").get<std::string>();
        t = fiber_sum(t, builtin_tuple(row.genus, s.at("sum").get<std::string>()),
                      along.empty() ? Word{} : parse_word(along));
      }
      auto rep = symplectic_rep_z(row.genus);
      auto ez = walked(t, rep, cfg.fuzz, cfg.seed + i);
      InvariantOptions opt;
      opt.compute_b1 = false;
      opt.kernel_basis = false;
      auto inv = compute_invariant(ez, rep, rep.psi, opt);
      auto fs = fibration_signature(ez, rep, &inv);
      row.type = *inv.type;
      row.sigma_meyer = fs.sigma_meyer;
      row.sigma_form = fs.sigma_form;
      row.form = inv.form_class;
      row.q = inv.form_class.class_string;
      row.det_unit = inv.form_class.unimodular;
      row.type_ok = row.type == row.type_expected;
      row.sigma_ok = fs.agree && fs.sigma_meyer == row.sigma_expected;
      row.q_ok = parse_class_string(row.q) == parse_class_string(row.q_expected);
    }));
  }
  for (auto& j : jobs) j.get();
  return rows;
}

inline int cmd_table(const RunConfig& cfg, std::ostream& os) {
  auto rows = table_rows(cfg);
  bool all = std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.ok(); });
  const std::string quantum = "n/a (representation unavailable)";
  if (cfg.json) {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"name", r.name},
                     {"genus", r.genus},
                     {"type", {r.type.first, r.type.second}},
                     {"type_expected", {r.type_expected.first, r.type_expected.second}},
                     {"sigma_meyer", r.sigma_meyer},
                     {"sigma_form", r.sigma_form},
                     {"sigma_expected", r.sigma_expected},
                     {"q_omega", r.q},
                     {"q_omega_expected", r.q_expected},
                     {"genus_disclaimer", r.form.genus_disclaimer},
                     {"type_ok", r.type_ok},
                     {"sigma_ok", r.sigma_ok},
                     {"q_ok", r.q_ok},
                     {"q_spin_odd", quantum},
                     {"q_spin_even", quantum}});
    json j = {{"rows", arr}, {"all_match", all}, {"fuzz", cfg.fuzz}};
    if (cfg.fuzz) j["seed"] = cfg.seed;
    emit(cfg, os, j.dump(2) + "\n");
    return all ? kExitOk : kExitCheckFailed;
  }
  auto mark = [](bool b) { return b ? "✓" : "✗"; };
  std::ostringstream o;
  o << std::left << std::setw(12) << "Fibration" << std::setw(3) << "g" << std::setw(12) << "Type" << std::setw(20)
    << "sigma (got/want)" << std::setw(48) << "Q_omega over Z (got | want)"
    << "Q_spin_odd / Q_spin_even\n";
  for (const auto& r : rows) {
    std::string type = "(" + std::to_string(r.type.first) + "," + std::to_string(r.type.second) + ") " + mark(r.type_ok);
    std::string sigma = std::to_string(r.sigma_meyer) + "/" + std::to_string(r.sigma_expected) + " " + mark(r.sigma_ok);
    std::string q = r.q + " | " + r.q_expected + " " + mark(r.q_ok);
    // setw counts bytes; the check marks are three bytes wide and one column wide.
    o << std::setw(12) << r.name << std::setw(3) << r.genus << std::setw(14) << type << std::setw(22) << sigma
      << std::setw(50) << q << quantum << "\n";
  }
  o << (all ? "all rows match\n" : "MISMATCH\n");
  if (cfg.fuzz) o << "(each tuple moved by " << cfg.fuzz << " random Hurwitz moves first, seed " << cfg.seed << ")\n";
  emit(cfg, os, o.str());
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace cli_detail

/// Entry point; returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& os = std::cout, std::ostream& es = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Bilinear-form invariants of Hurwitz tuples of Dehn twists"};
  app.require_subcommand(1);
  app.fallthrough();
  auto* ring_opt = app.add_option("--ring", cfg.ring, "Z | Q | Zmod:P | Fpy:p | Zzeta16")->capture_default_str();
  app.add_option("--genus", cfg.genus, "surface genus");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_flag("--json", cfg.json, "JSON output");
  app.add_option("--out", cfg.out, "write output to a file");

  auto add_tuple = [&](CLI::App* sub) {
    sub->add_option("--builtin", cfg.builtin, "xi1 | xi2 | xi3");
    sub->add_option("--tuple-file", cfg.tuple_file, "tuple JSON file");
    sub->add_option("--word", cfg.word, "tuple as a positive word, e.g. 'c1 c2 | ^6'");
    sub->add_option("--sum", cfg.sum, "fiber-sum with this built-in tuple");
    sub->add_option("--along", cfg.along, "gluing word for --sum ('id' for none)")->capture_default_str();
  };
  auto* inv = app.add_subcommand("invariant", "compute the bilinear-form invariant of a tuple");
  add_tuple(inv);
  inv->add_option("--rep-file", cfg.rep_file, "representation JSON file (default: symplectic)");
  inv->add_option("--ell", cfg.ell, "base point l of Q");
  inv->add_option("--fuzz", cfg.fuzz, "apply this many random moves first");
  auto* tab = app.add_subcommand("table", "recompute the built-in rows of the reference table");
  tab->add_option("--fuzz", cfg.fuzz, "apply this many random moves to each tuple first");
  tab->add_option("--table-file", cfg.table_file, "expected values")->capture_default_str();
  auto* sig = app.add_subcommand("signature", "signature by Meyer's cocycle and by the invariant");
  add_tuple(sig);
  sig->add_option("--fuzz", cfg.fuzz, "apply this many random moves first");
  auto* fz = app.add_subcommand("fuzz", "Hurwitz-invariance checks along a random walk");
  add_tuple(fz);
  fz->add_option("--rep-file", cfg.rep_file, "representation JSON file (default: symplectic)");
  fz->add_option("--steps", cfg.steps, "walk length")->capture_default_str();
  auto* mv = app.add_subcommand("moves", "apply a move script to a tuple and write the result");
  add_tuple(mv);
  mv->add_option("--script", cfg.script, "move script JSON file");
  mv->add_option("--random", cfg.random, "then apply this many random moves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, os, es);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.ring_given = ring_opt->count() > 0;
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "table") return cli_detail::cmd_table(cfg, os);
    HurwitzTuple t = cli_detail::resolve_tuple(cfg);
    if (cfg.command == "moves") return cli_detail::cmd_moves(cfg, t, os);
    AnyRepresentation rep = cli_detail::resolve_representation(cfg, t);
    if (cfg.command == "signature") {
      auto* z = std::get_if<Representation<Integer>>(&rep);
      if (!z) throw RingError("signature needs a representation over Z");
      return cli_detail::cmd_signature(cfg, t, *z, os);
    }
    return std::visit(
        [&](const auto& r) {
          return cfg.command == "fuzz" ? cli_detail::cmd_fuzz(cfg, t, r, os) : cli_detail::cmd_invariant(cfg, t, r, os);
        },
        rep);
  } catch (const ProductError& e) {
    es << "error: " << e.what() << "\n";
    return kExitProduct;
  } catch (const std::invalid_argument& e) {  // usage, schema, validation
    es << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    es << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RingError& e) {
    es << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace hurwitz
