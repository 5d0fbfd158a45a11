#include "entrolab/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "entrolab/errors.hpp"

namespace entrolab::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ValidationError(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ValidationError("complex value must be a number or [re, im]: " + j.dump());
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Vector parse_vector(const Json& j, const std::string& space_id) {
  if (!j.is_array()) throw ValidationError("vector must be an array");
  std::vector<Complex> c;
  c.reserve(j.size());
  for (const auto& e : j) c.push_back(parse_complex(e));
  return Vector(std::move(c), space_id);
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& z : v.coords()) out.push_back(to_json(z));
  return out;
}

SpaceSpec parse_space(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "lp") {
    const Json& p = field(j, "p");
    if (p.is_string()) {
      if (p.get<std::string>() != "inf") throw ValidationError("p must be a number or \"inf\"");
      return SpaceSpec::lp(std::numeric_limits<double>::infinity());
    }
    return SpaceSpec::lp(number(p, "p"));
  }
  if (kind == "faggregate") return SpaceSpec::faggregate(parse_space(field(j, "base")));
  throw ValidationError("unknown space kind \"" + kind + "\"");
}

Json to_json(const SpaceSpec& s) {
  if (s.kind() == SpaceSpec::Kind::faggregate) return {{"kind", "faggregate"}, {"base", to_json(s.base())}};
  Json p = std::isinf(s.p()) ? Json("inf") : Json(s.p());
  return {{"kind", "lp"}, {"p", p}};
}

SequenceRule parse_rule(const Json& j) {
  if (j.is_array()) {
    std::vector<Complex> v;
    for (const auto& e : j) v.push_back(parse_complex(e));
    return SequenceRule::list(std::move(v));
  }
  const std::string rule = field(j, "rule").get<std::string>();
  if (rule == "const") return SequenceRule::constant(parse_complex(field(j, "value")));
  if (rule == "geometric") {
    return SequenceRule::geometric(parse_complex(field(j, "first")), parse_complex(field(j, "ratio")));
  }
  if (rule == "harmonic") return SequenceRule::harmonic();
  if (rule == "list") return parse_rule(field(j, "values"));
  throw ValidationError("unknown weight rule \"" + rule + "\"");
}

Json to_json(const SequenceRule& r) {
  switch (r.kind()) {
    case SequenceRule::Kind::constant:
      return {{"rule", "const"}, {"value", to_json(r.first())}};
    case SequenceRule::Kind::geometric:
      return {{"rule", "geometric"}, {"first", to_json(r.first())}, {"ratio", to_json(r.ratio())}};
    case SequenceRule::Kind::harmonic:
      return {{"rule", "harmonic"}};
    case SequenceRule::Kind::list: {
      Json v = Json::array();
      for (const auto& z : r.values()) v.push_back(to_json(z));
      return {{"rule", "list"}, {"values", v}};
    }
  }
  return {};
}

Operator parse_operator(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "backward_shift") return Operator::backward_shift(parse_rule(field(j, "weights")));
  if (kind == "forward_shift") return Operator::forward_shift(parse_rule(field(j, "weights")));
  if (kind == "diagonal") return Operator::diagonal(parse_rule(field(j, "eigenvalues")));
  if (kind == "dense") {
    const Json& rows = j.contains("entries") ? j.at("entries") : field(j, "rows");
    if (!rows.is_array() || rows.empty()) throw ValidationError("dense rows must be a nonempty array");
    const auto d = static_cast<Eigen::Index>(rows.size());
    Matrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
        throw ValidationError("dense matrix must be square");
      }
      for (Eigen::Index c = 0; c < d; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
    }
    return Operator::dense(std::move(m));
  }
  if (kind == "scaled") return Operator::scaled(parse_complex(field(j, "alpha")), parse_operator(field(j, "inner")));
  if (kind == "direct_sum") {
    std::vector<Operator> parts;
    for (const auto& p : field(j, "parts")) parts.push_back(parse_operator(p));
    return Operator::direct_sum(std::move(parts));
  }
  if (kind == "power") {
    return Operator::power(parse_operator(field(j, "base")), integer(field(j, "exponent"), "exponent"));
  }
  if (kind == "identity") {
    const int d = integer(field(j, "dim"), "dim");
    if (d < 1) throw ValidationError("identity dim must be >= 1");
    return Operator::identity(static_cast<std::size_t>(d));
  }
  if (kind == "rolewicz") return Operator::rolewicz(parse_complex(field(j, "alpha")));
  if (kind == "rotation") {
    const double theta = number(field(j, "angle"), "angle");
    const double scale = j.contains("scale") ? number(j.at("scale"), "scale") : 1.0;
    Matrix m(2, 2);
    m << scale * std::cos(theta), -scale * std::sin(theta), scale * std::sin(theta), scale * std::cos(theta);
    return Operator::dense(std::move(m));
  }
  throw ValidationError("unknown operator kind \"" + kind + "\"");
}

SegmentSchedule parse_schedule(const Json& j, const std::string& space_id) {
  SegmentSchedule s;
  s.gap = integer(field(j, "gap"), "gap");
  for (const auto& seg : field(j, "segments")) {
    s.segments.push_back({integer(field(seg, "a"), "a"), integer(field(seg, "b"), "b"),
                          parse_vector(field(seg, "y"), space_id)});
  }
  s.validate();
  return s;
}

Json to_json(const ShadowReport& r) {
  Json devs = Json::array();
  for (const auto& d : r.deviations) {
    devs.push_back({{"segment", d.segment},
                    {"max_deviation", d.max_deviation},
                    {"tail_bound", d.tail_bound},
                    {"worst_time", d.worst_time}});
  }
  return {{"xi", to_json(r.xi)},
          {"period", r.period},
          {"dim", r.dim},
          {"deviations", devs},
          {"exactly_periodic", r.exactly_periodic},
          {"periodicity_error", r.periodicity_error},
          {"admissible", r.admissible},
          {"epsilon", r.epsilon},
          {"certified", r.certified}};
}

Json to_json(const EntropyEstimate& e) {
  Json slopes = Json::array();
  for (const auto& f : e.slopes) {
    Json s = {{"epsilon", f.epsilon}, {"valid", f.valid}, {"points", f.points}};
    if (f.valid) {
      s["slope"] = f.slope;
      s["slope_log2"] = f.slope / std::numbers::ln2;
      s["residual"] = f.residual;
      s["n_lo"] = f.n_lo;
      s["n_hi"] = f.n_hi;
    }
    if (!f.note.empty()) s["note"] = f.note;
    slopes.push_back(s);
  }
  return {{"h_estimate", e.h_estimate},
          {"h_estimate_log2", e.h_estimate / std::numbers::ln2},
          {"h_epsilon", e.h_epsilon},
          {"slopes", slopes},
          {"window", Json::array({e.window_lo, e.window_hi})},
          {"monotonicity_repaired", e.monotonicity_repaired}};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string table_csv(const EntropyTable& t) {
  std::ostringstream os;
  os << "n,epsilon,s,method,saturated,resolution_limited\n";
  const char* method = t.method == CountMethod::exact ? "exact" : "greedy";
  for (const auto& e : t.entries) {
    os << e.n << ',' << format_double(e.epsilon) << ',' << e.count << ',' << method << ','
       << (e.saturated ? "true" : "false") << ',' << (e.resolution_limited ? "true" : "false") << '\n';
  }
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void emit_plot_data(const EntropyTable& t, const std::filesystem::path& stem) {
  if (t.entries.empty() || t.epsilons.empty() || t.n_values.empty()) {
    throw ValidationError("cannot plot an empty table");
  }
  std::ostringstream csv;
  csv << "n,epsilon,log_s\n";
  double y_max = 0.0;
  for (const auto& e : t.entries) {
    const double y = std::log(static_cast<double>(e.count));
    y_max = std::max(y_max, y);
    csv << e.n << ',' << format_double(e.epsilon) << ',' << format_double(y) << '\n';
  }
  write_file(std::filesystem::path(stem).concat(".csv"), csv.str());

  const double w = 640, h = 400, m = 40;
  const double n_lo = t.n_values.front(), n_hi = t.n_values.back();
  const double x_span = n_hi > n_lo ? n_hi - n_lo : 1.0;
  const double y_span = y_max > 0.0 ? y_max : 1.0;
  auto px = [&](double n) { return m + (n - n_lo) / x_span * (w - 2 * m); };
  auto py = [&](double y) { return h - m - y / y_span * (h - 2 * m); };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  svg << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\">n</text>\n";
  svg << "<text x=\"4\" y=\"" << m - 10 << "\">log s_n</text>\n";
  for (std::size_t i = 0; i < t.epsilons.size(); ++i) {
    const char* col = colors[i % 6];
    svg << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (int n : t.n_values) {
      const double y = std::log(static_cast<double>(t.count(n, t.epsilons[i])));
      svg << format_double(px(n)) << ',' << format_double(py(y)) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << w - m - 90 << "\" y=\"" << m + 14 * static_cast<double>(i) << "\" fill=\"" << col
        << "\">eps=" << format_double(t.epsilons[i]) << "</text>\n";
  }
  svg << "</svg>\n";
  write_file(std::filesystem::path(stem).concat(".svg"), svg.str());
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace entrolab::io
