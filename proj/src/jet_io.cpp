#include "jetex/jet_io.hpp"

#include "jetex/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace jetex {

namespace {

using nlohmann::json;

Eigen::VectorXd vector_field(const json& rec, const char* key, std::size_t index) {
  if (!rec.contains(key) || !rec.at(key).is_array()) {
    throw ParseError("point " + std::to_string(index) + ": missing array '" + key + "'");
  }
  const json& arr = rec.at(key);
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_number()) {
      throw ParseError("point " + std::to_string(index) + ": non-numeric entry in '" + key + "'");
    }
    v[static_cast<Eigen::Index>(k)] = arr[k].get<double>();
  }
  return v;
}

NormSpec parse_norm(const json& doc, int dim, unsigned long long seed) {
  if (!doc.contains("norm")) return NormSpec::euclidean();
  const json& nj = doc.at("norm");
  std::string kind;
  if (nj.is_string()) {
    kind = nj.get<std::string>();
  } else if (nj.is_object() && nj.contains("kind") && nj.at("kind").is_string()) {
    kind = nj.at("kind").get<std::string>();
  } else {
    throw ParseError("'norm' must be a string or an object with 'kind'");
  }
  if (kind == "euclidean") return NormSpec::euclidean();
  if (kind != "lp") throw ParseError("unknown norm kind '" + kind + "'");
  if (!nj.is_object() || !nj.contains("p") || !nj.at("p").is_number()) {
    throw ParseError("l_p norm needs a numeric 'p'");
  }
  const double p = nj.at("p").get<double>();
  if (!(p > 1.0 && p <= 2.0)) throw ParseError("l_p exponent must satisfy 1 < p <= 2");
  if (nj.contains("C")) {
    if (!nj.at("C").is_number()) throw ParseError("'C' must be numeric");
    return NormSpec::lp_with_constant(p, nj.at("C").get<double>());
  }
  return NormSpec::lp(p, dim, seed);
}

} // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RawJet parse_jet_json(const std::string& text, unsigned long long seed) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("jet file must hold a JSON object");
  if (!doc.contains("dimension") || !doc.at("dimension").is_number_integer()) {
    throw ParseError("missing integer 'dimension'");
  }
  if (!doc.contains("points") || !doc.at("points").is_array()) {
    throw ParseError("missing array 'points'");
  }
  RawJet raw;
  raw.dim = doc.at("dimension").get<int>();
  raw.norm = parse_norm(doc, raw.dim, seed);
  const json& pts = doc.at("points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const json& rec = pts[i];
    if (!rec.is_object()) throw ParseError("point " + std::to_string(i) + " is not an object");
    if (!rec.contains("f") || !rec.at("f").is_number()) {
      throw ParseError("point " + std::to_string(i) + ": missing numeric 'f'");
    }
    JetPoint pt;
    pt.x = vector_field(rec, "x", i);
    pt.g = vector_field(rec, "g", i);
    pt.f = rec.at("f").get<double>();
    raw.points.push_back(std::move(pt));
  }
  return raw;
}

JetSet read_jet_file(const std::string& path, unsigned long long seed) {
  return validate_jet(parse_jet_json(read_text_file(path), seed));
}

std::string serialize_jet_json(const JetSet& jet) {
  // Hand-written so every number uses %.17g.
  auto vec = [](const Eigen::VectorXd& v) {
    std::string s = "[";
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (k) s += ", ";
      s += format_number(v[k]);
    }
    return s + "]";
  };
  std::string out = "{\n  \"dimension\": " + std::to_string(jet.dim()) + ",\n  \"norm\": ";
  if (jet.norm().kind == NormKind::Lp) {
    out += "{\"kind\": \"lp\", \"p\": " + format_number(jet.norm().p) +
           ", \"C\": " + format_number(jet.norm().smoothness) + "}";
  } else {
    out += "\"euclidean\"";
  }
  out += ",\n  \"points\": [";
  for (std::size_t i = 0; i < jet.size(); ++i) {
    const JetPoint& pt = jet[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"x\": " + vec(pt.x) + ", \"f\": " + format_number(pt.f) + ", \"g\": " + vec(pt.g) +
           "}";
  }
  out += "\n  ]\n}\n";
  return out;
}

std::vector<Eigen::VectorXd> parse_points(const std::string& text, int dim) {
  std::vector<Eigen::VectorXd> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream fields(line);
    std::vector<double> vals;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw ParseError("line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
      vals.push_back(v);
    }
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) != dim) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                       " coordinates, got " + std::to_string(vals.size()));
    }
    out.emplace_back(Eigen::Map<const Eigen::VectorXd>(vals.data(), dim));
  }
  return out;
}

std::vector<Eigen::VectorXd> read_points_file(const std::string& path, int dim) {
  return parse_points(read_text_file(path), dim);
}

} // namespace jetex
