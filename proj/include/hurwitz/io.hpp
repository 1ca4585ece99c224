#pragma once

// JSON formats: matrices, tuple files, representation files, move scripts,
// and result records.

#include <fstream>
#include <sstream>
#include <variant>

#include "hurwitz/fuzz.hpp"
#include "hurwitz/meyer.hpp"
#include "json.hpp"

namespace hurwitz {

using json = nlohmann::ordered_json;

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elements and matrices

/// Ring elements are strings ("1+z^3", "y", "-2/3"); plain integers are accepted.
template <class T>
T element_from_json(const json& j, const T& like) {
  if (j.is_number_integer()) return parse_as(like, std::to_string(j.get<long long>()));
  if (j.is_string()) return parse_as(like, j.get<std::string>());
  throw SchemaError("ring element must be a string or an integer, got " + j.dump());
}

template <class T>
json matrix_json(const Matrix<T>& M) {
  json rows = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < M.cols(); ++k) r.push_back(M(i, k).str());
    rows.push_back(r);
  }
  return rows;
}

/// A matrix with its ring header.
template <class T>
json matrix_record(const Matrix<T>& M) {
  return {{"ring", M.zero().descriptor().name()}, {"rows", M.rows()}, {"cols", M.cols()}, {"entries", matrix_json(M)}};
}

/// Reads an array of arrays, or a record as written by matrix_record.
template <class T>
Matrix<T> matrix_from_json(const json& j, const T& like, const std::string& where = "matrix") {
  const json* rows = &j;
  if (j.is_object()) {
    if (j.contains("ring") && RingDescriptor::parse(j.at("ring").get<std::string>()) != like.descriptor())
      throw SchemaError(where + ": ring " + j.at("ring").get<std::string>() + " where " + like.descriptor().name() +
                        " was expected");
    rows = &detail::require(j, "entries", where);
  }
  if (!rows->is_array()) throw SchemaError(where + ": expected an array of rows");
  std::size_t cols = rows->empty() ? 0 : (*rows)[0].size();
  Matrix<T> M(rows->size(), cols, like);
  for (std::size_t i = 0; i < rows->size(); ++i) {
    const json& r = (*rows)[i];
    if (!r.is_array() || r.size() != cols) throw SchemaError(where + ": row " + std::to_string(i + 1) + " is ragged");
    for (std::size_t k = 0; k < cols; ++k) {
      try {
        M(i, k) = element_from_json(r[k], like);
      } catch (const RingError& e) {
        throw SchemaError(where + " entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + "): " + e.what());
      }
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// Tuples

inline json tuple_json(const HurwitzTuple& t) {
  json entries = json::array();
  for (const auto& e : t.entries) {
    json conj = json::array();
    for (const auto& l : e.conj) conj.push_back(to_string(l));
    entries.push_back({{"base", e.base}, {"conj", conj}});
  }
  json j = {{"alphabet", t.alphabet}, {"entries", entries}};
  if (t.genus) j["genus"] = *t.genus;
  return j;
}

inline HurwitzTuple tuple_from_json(const json& j) {
  const std::string where = "tuple file";
  HurwitzTuple t;
  if (j.contains("genus")) {
    if (!j.at("genus").is_number_integer() || j.at("genus").get<int>() < 1)
      throw SchemaError(where + ": genus must be a positive integer");
    t.genus = j.at("genus").get<int>();
  }
  if (j.contains("alphabet")) {
    t.alphabet = j.at("alphabet").get<std::string>();
    if (t.alphabet != "builtin-chain" && t.alphabet != "custom")
      throw SchemaError(where + ": alphabet must be \"builtin-chain\" or \"custom\"");
  }
  const json& entries = detail::require(j, "entries", where);
  if (!entries.is_array() || entries.empty()) throw SchemaError(where + ": \"entries\" must be a non-empty array");
  for (const auto& e : entries) {
    TwistWord w;
    if (e.is_string()) {
      w.base = e.get<std::string>();
    } else {
      w.base = detail::require(e, "base", where).get<std::string>();
      if (e.contains("conj")) {
        const json& c = e.at("conj");
        if (c.is_string()) {
          w.conj = free_reduce(parse_word(c.get<std::string>()));
        } else {
          for (const auto& l : c) w.conj = concat(w.conj, parse_word(l.get<std::string>()));
        }
      }
    }
    auto base = parse_word(w.base);
    if (base.size() != 1 || base[0].exp != 1) throw SchemaError(where + ": base '" + w.base + "' is not a single letter");
    t.entries.push_back(w);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Move scripts: {"moves": [{"move": "forward", "index": 3},
//                          {"move": "backward", "index": 1},
//                          {"move": "conjugate", "word": "c1 c2^-1"}]}

inline std::vector<MoveSpec> moves_from_json(const json& j) {
  const json& list = j.is_array() ? j : detail::require(j, "moves", "move script");
  std::vector<MoveSpec> out;
  for (const auto& m : list) {
    MoveSpec s;
    std::string kind = detail::require(m, "move", "move script").get<std::string>();
    if (kind == "forward" || kind == "backward") {
      s.kind = MoveSpec::Elementary;
      s.direction = kind == "forward" ? MoveDirection::Forward : MoveDirection::Backward;
      s.index = detail::require(m, "index", "move script").get<std::size_t>();
    } else if (kind == "conjugate") {
      s.kind = MoveSpec::Global;
      s.conjugator = free_reduce(parse_word(detail::require(m, "word", "move script").get<std::string>()));
    } else {
      throw SchemaError("move script: unknown move '" + kind + "'");
    }
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Representations

using AnyRepresentation = std::variant<Representation<Integer>, Representation<Rational>, Representation<ModP>,
                                       Representation<TruncPoly>, Representation<Cyclotomic16>>;

template <class T>
Representation<T> representation_from_json(const json& j, const T& like) {
  const std::string where = "representation file";
  Representation<T> rep;
  rep.zero = like;
  const json& dim = detail::require(j, "dim", where);
  if (!dim.is_number_integer() || dim.get<long>() < 1) throw SchemaError(where + ": dim must be a positive integer");
  rep.dim = dim.get<std::size_t>();
  if (j.contains("genus")) rep.genus = j.at("genus").get<int>();
  if (j.contains("note")) rep.note = j.at("note").get<std::string>();
  const json& gens = detail::require(j, "generators", where);
  if (!gens.is_object() || gens.empty()) throw SchemaError(where + ": \"generators\" must be a non-empty object");
  for (const auto& [name, gj] : gens.items()) {
    auto w = parse_word(name);
    if (w.size() != 1 || w[0].exp != 1) throw SchemaError(where + ": bad generator letter '" + name + "'");
    Generator<T> g;
    g.matrix = matrix_from_json(detail::require(gj, "matrix", where + " generator " + name), like, "generator " + name);
    if (gj.contains("separating")) {
      if (!gj.at("separating").is_boolean()) throw SchemaError(where + ": generator " + name + ": separating must be a boolean");
      g.separating = gj.at("separating").template get<bool>();
    }
    if (gj.contains("homology")) g.homology = gj.at("homology").template get<std::vector<long>>();
    rep.generators.emplace(name, std::move(g));
  }
  if (j.contains("psi")) rep.psi = matrix_from_json(j.at("psi"), like, "psi");
  else rep.psi = Matrix<T>(0, 0, like);
  if (j.contains("psi_symmetry")) {
    try {
      rep.psi_symmetry = parse_psi_symmetry(j.at("psi_symmetry").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  if (rep.psi.rows() && rep.psi_symmetry == PsiSymmetry::None)
    throw SchemaError(where + ": psi given without psi_symmetry");
  validate_representation(rep);
  return rep;
}

inline AnyRepresentation representation_from_json(const json& j) {
  RingDescriptor d;
  try {
    d = RingDescriptor::parse(detail::require(j, "ring", "representation file").get<std::string>());
  } catch (const RingError& e) {
    throw SchemaError(std::string("representation file: ") + e.what());
  }
  return std::visit([&](const auto& zero) -> AnyRepresentation { return representation_from_json(j, zero); },
                    zero_of(d));
}

inline AnyRepresentation load_representation(const std::string& path) {
  return representation_from_json(read_json_file(path));
}

template <class T>
json representation_json(const Representation<T>& rep) {
  json gens = json::object();
  for (const auto& [name, g] : rep.generators) {
    json gj = {{"matrix", matrix_json(g.matrix)}};
    if (g.separating) gj["separating"] = *g.separating;
    if (g.homology) gj["homology"] = *g.homology;
    gens[name] = gj;
  }
  json j = {{"ring", rep.ring().name()}, {"dim", rep.dim}, {"generators", gens}};
  if (rep.has_psi()) {
    j["psi"] = matrix_json(rep.psi);
    j["psi_symmetry"] = to_string(rep.psi_symmetry);
  }
  if (rep.genus) j["genus"] = *rep.genus;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

// ---------------------------------------------------------------------------
// Results

inline json form_class_json(const FormClass& fc) {
  json j = {{"class_string", fc.class_string},
            {"rank", fc.rank},
            {"zero", fc.zero},
            {"parity", to_string(fc.parity)},
            {"determinant", fc.determinant},
            {"unimodular", fc.unimodular},
            {"symmetric", fc.symmetric},
            {"alternating", fc.alternating},
            {"genus_disclaimer", fc.genus_disclaimer}};
  if (fc.has_signature) {
    j["positive"] = fc.positive;
    j["negative"] = fc.negative;
    j["signature"] = fc.signature();
  }
  return j;
}

inline json unimodularity_json(const UnimodularityReport& r) {
  json smith = json::array();
  for (const auto& [entry, diag] : r.smith) smith.push_back({{"entry", entry}, {"smith_diagonal", diag}});
  return {{"torsion_free_cokernels", r.torsion_free},
          {"det_w", r.det_w},
          {"det_unit", r.det_unit},
          {"certified", r.certified()},
          {"cokernels", smith}};
}

template <class T>
json invariant_json(const InvariantResult<T>& r, const UnimodularityReport* cert = nullptr, bool with_w = true) {
  json j = {{"ring", r.W.zero().descriptor().name()},
            {"m", r.m},
            {"dim", r.dim},
            {"kernel_rank", r.kernel_rank},
            {"mz_rank", r.mz_rank},
            {"form", form_class_json(r.form_class)},
            {"class_string", r.form_class.class_string},
            {"determinant", r.determinant.str()},
            {"quotient_torsion", r.quotient_torsion},
            {"product", r.product},
            {"kernel_method", r.kernel_method},
            {"lemma_hypothesis", r.lemma_hypothesis}};
  if (r.b1) j["b1"] = *r.b1;
  if (r.type) {
    j["type"] = {r.type->first, r.type->second};
    if (r.form_class.has_signature)
      j["sigma"] = r.form_class.signature() + static_cast<long>(r.m) - static_cast<long>(r.type->first);
  }
  if (r.predicted_mz) {
    j["predicted"] = {{"mz_rank", *r.predicted_mz},
                      {"kernel_rank", *r.predicted_kernel},
                      {"holds", r.rank_formulas_hold()}};
  }
  if (cert) j["certificate"] = unimodularity_json(*cert);
  if (with_w) j["W"] = matrix_json(r.W);
  return j;
}

inline json signature_json(const FibrationSignature& fs) {
  return {{"sigma_meyer", fs.sigma_meyer},
          {"sigma_form", fs.sigma_form},
          {"agree", fs.agree},
          {"per_term", fs.per_term},
          {"m", fs.m},
          {"m_ns", fs.m_ns}};
}

inline json fuzz_json(const FuzzReport& r) {
  return {{"passed", r.passed()},
          {"steps", r.steps},
          {"invariant_checks", r.invariant_checks},
          {"product_checks", r.product_checks},
          {"base_change_checks", r.base_change_checks},
          {"failures", r.failures},
          {"baseline_class", r.baseline_class}};
}

}  // namespace hurwitz
