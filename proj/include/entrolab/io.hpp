#pragma once

// JSON schemas for configs and reports, CSV tables, and plot output.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "entrolab/entropy.hpp"
#include "entrolab/operators.hpp"
#include "entrolab/spaces.hpp"
#include "entrolab/specification.hpp"

namespace entrolab::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// A complex number is a plain number or a [re, im] pair.
Complex parse_complex(const Json& j);
Json to_json(Complex z);

Vector parse_vector(const Json& j, const std::string& space_id = {});
Json to_json(const Vector& v);

// {"kind":"lp","p":2} with p a number or "inf";
// {"kind":"faggregate","base":{...}}
SpaceSpec parse_space(const Json& j);
Json to_json(const SpaceSpec& s);

// {"rule":"const","value":c} | {"rule":"geometric","first":a,"ratio":r} |
// {"rule":"harmonic"} | {"rule":"list","values":[...]}
SequenceRule parse_rule(const Json& j);
Json to_json(const SequenceRule& r);

// {"kind": backward_shift | forward_shift (weights), diagonal (eigenvalues:
// rule or list), dense (entries, alias rows), scaled (alpha, inner), direct_sum (parts),
// power (base, exponent), identity (dim), rolewicz (alpha),
// rotation (angle, scale)}
Operator parse_operator(const Json& j);

// {"gap":N,"segments":[{"a":0,"b":1,"y":[...]}]}
SegmentSchedule parse_schedule(const Json& j, const std::string& space_id = {});

Json to_json(const ShadowReport& r);
Json to_json(const EntropyEstimate& e);

// n,epsilon,s,method,saturated,resolution_limited
std::string table_csv(const EntropyTable& t);

// Writes <stem>.csv with (n, epsilon, log s_n) and <stem>.svg with one line
// per epsilon. Throws on an empty table.
void emit_plot_data(const EntropyTable& t, const std::filesystem::path& stem);

// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const Json& config);

// %.17g, so values round-trip.
std::string format_double(double x);

void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace entrolab::io
