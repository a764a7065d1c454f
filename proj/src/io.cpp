#include "cgeom/io.hpp"

#include "cgeom/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace cgeom {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, field + ": " + what);
}

const Json& member(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) field_error(path.empty() ? "<root>" : path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) field_error(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(field, "number is not finite");
  return v;
}

int positive_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 1000000) {
    field_error(field, "expected a positive integer");
  }
  return static_cast<int>(j.get<long long>());
}

Vec vector(const Json& j, const std::string& field, int dim) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  if (dim >= 0 && static_cast<int>(j.size()) != dim) {
    field_error(field, "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], index(field, i));
  return v;
}

Mat rows(const Json& j, const std::string& field, int dim) {
  if (!j.is_array() || j.empty()) field_error(field, "expected a nonempty array of rows");
  Mat m(static_cast<Eigen::Index>(j.size()), dim);
  for (std::size_t i = 0; i < j.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = vector(j[i], index(field, i), dim).transpose();
  }
  return m;
}

// Rewraps library validation failures so they carry the field name.
template <class F>
auto validated(const std::string& what, F&& make) {
  try {
    return make();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(e.code(), what + ": " + e.what());
  }
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float: write_number(out, j.get<double>()); return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += indent >= 0 && flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    default: out += j.dump(); return;
  }
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("parse error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorCode::ParseError,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

Json read_json_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return parse_json_text(text, path == "-" ? "<stdin>" : path);
}

std::string dump_json(const Json& value, int indent) {
  std::string out;
  write(out, value, indent, 0);
  return out;
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json mat_to_json(const Mat& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i).transpose()));
  return a;
}

DiscreteSphericalMeasure measure_from_json(const Json& j) {
  const int dim = positive_int(member(j, "", "dim"), "dim");
  bool even = false;
  if (j.contains("even")) {
    if (!j["even"].is_boolean()) field_error("even", "expected a boolean");
    even = j["even"].get<bool>();
  }
  const Json& atoms = member(j, "", "atoms");
  if (!atoms.is_array() || atoms.empty()) field_error("atoms", "expected a nonempty array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string at = index("atoms", i);
    Atom a;
    a.u = vector(member(atoms[i], at, "u"), join(at, "u"), dim);
    a.c = number(member(atoms[i], at, "c"), join(at, "c"));
    out.push_back(std::move(a));
  }
  return validated("measure", [&] { return DiscreteSphericalMeasure(dim, std::move(out), even); });
}

Json measure_to_json(const DiscreteSphericalMeasure& m) {
  Json j;
  j["dim"] = m.dim();
  j["even"] = m.even();
  Json atoms = Json::array();
  for (const Atom& a : m.atoms()) {
    Json e;
    e["u"] = vec_to_json(a.u);
    e["c"] = a.c;
    atoms.push_back(std::move(e));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

Subspace subspace_from_json(const Json& j) {
  const int n = positive_int(member(j, "", "ambient_dim"), "ambient_dim");
  Mat basis = rows(member(j, "", "basis"), "basis", n);
  return validated("subspace", [&] { return Subspace(std::move(basis)); });
}

Json subspace_to_json(const Subspace& H) {
  Json j;
  j["ambient_dim"] = H.ambient_dim();
  j["basis"] = mat_to_json(H.basis());
  return j;
}

Body body_from_json(const Json& j) {
  const Json& kind = member(j, "", "kind");
  if (!kind.is_string()) field_error("kind", "expected a string");
  const std::string k = kind.get<std::string>();
  const int dim = positive_int(member(j, "", "dim"), "dim");
  if (k == "vpolytope") {
    Mat v = rows(member(j, "", "vertices"), "vertices", dim);
    return validated("body", [&] { return Body(VPolytope(std::move(v))); });
  }
  if (k == "hpolytope") {
    Mat a = rows(member(j, "", "normals"), "normals", dim);
    Vec b = vector(member(j, "", "offsets"), "offsets", static_cast<int>(a.rows()));
    return validated("body", [&] { return Body(HPolytope(std::move(a), std::move(b))); });
  }
  if (k == "reference") {
    const Json& name = member(j, "", "body");
    if (!name.is_string()) field_error("body", "expected a string");
    const auto rk = parse_reference_kind(name.get<std::string>());
    if (!rk) field_error("body", "expected one of ball, cube, cross, simplex, polar_simplex");
    return ReferenceBody{*rk, dim};
  }
  field_error("kind", "expected \"vpolytope\", \"hpolytope\" or \"reference\"");
}

Json body_to_json(const Body& b) {
  Json j;
  if (const auto* v = std::get_if<VPolytope>(&b)) {
    j["kind"] = "vpolytope";
    j["dim"] = v->dim();
    j["vertices"] = mat_to_json(v->vertices());
  } else if (const auto* h = std::get_if<HPolytope>(&b)) {
    j["kind"] = "hpolytope";
    j["dim"] = h->dim();
    j["normals"] = mat_to_json(h->normals());
    j["offsets"] = vec_to_json(h->offsets());
  } else {
    const auto& r = std::get<ReferenceBody>(b);
    j["kind"] = "reference";
    j["body"] = std::string(to_string(r.kind));
    j["dim"] = r.k;
  }
  return j;
}

}  // namespace cgeom
