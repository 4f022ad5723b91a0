#include "coalition/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "coalition/error.hpp"
#include "json.hpp"

namespace coalition {

using nlohmann::json;

Profile parse_profile_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::kInvalidProfile, std::string("profile is not valid JSON: ") + e.what());
  }
  try {
    const int m = doc.at("m").get<int>();
    Profile p(m);
    for (const auto& vote : doc.at("votes")) {
      const auto count = vote.at("count").get<std::int64_t>();
      if (count < 0) throw Error(Errc::kInvalidProfile, "negative vote count");
      const VoterType t(vote.at("ranking").get<std::vector<Candidate>>());
      if (t.m() != m) throw Error(Errc::kInvalidProfile, "ranking length differs from m");
      p.add(t, count);
    }
    if (p.n() < 1) throw Error(Errc::kInvalidProfile, "profile has no voters");
    return p;
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidProfile, std::string("malformed profile: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::kInvalidProfile) throw;
    throw Error(Errc::kInvalidProfile, e.what());
  }
}

std::string profile_to_json(const Profile& p) {
  json votes = json::array();
  for (std::size_t t = 0; t < p.type_count(); ++t) {
    if (p.count(t) == 0) continue;
    votes.push_back({{"ranking", VoterType::from_index(p.m(), t).ranking()}, {"count", p.count(t)}});
  }
  return json{{"m", p.m()}, {"votes", votes}}.dump();
}

Profile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kInvalidProfile, "cannot open profile file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_profile_json(buffer.str());
}

namespace {

json number(const Rational& q, bool exact) {
  if (exact) return to_string(q);
  return to_double(q);
}

json point(const Point2& p, bool exact) { return json::array({number(p.lambda, exact), number(p.mu, exact)}); }

std::string format_double(double x, int digits) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::kMalformedInput, "bad number '" + s + "'");
  }
}

std::uint64_t parse_count(const std::string& s) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::kMalformedInput, "bad count '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

void write_header(std::ostream& os, const CurveHeader& h) {
  os << "# rule=" << h.rule << " m=" << h.m << " seed=" << h.seed << '\n';
}

CurveHeader parse_header(const std::string& line) {
  CurveHeader h;
  std::map<std::string, std::string> fields;
  for (const auto& token : split(line.substr(1), ' ')) {
    const auto eq = token.find('=');
    if (eq != std::string::npos) fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  if (!fields.count("rule") || !fields.count("m") || !fields.count("seed")) {
    throw Error(Errc::kMalformedInput, "header must carry rule, m and seed");
  }
  h.rule = fields["rule"];
  h.m = static_cast<int>(parse_count(fields["m"]));
  h.seed = parse_count(fields["seed"]);
  return h;
}

// Reads the "# ..." header and the column line; returns the parsed header.
CurveHeader read_preamble(std::istream& is, const std::string& columns) {
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#') {
    throw Error(Errc::kMalformedInput, "missing '#' header line");
  }
  CurveHeader h = parse_header(line);
  if (!std::getline(is, line) || line != columns) {
    throw Error(Errc::kMalformedInput, "expected columns '" + columns + "'");
  }
  return h;
}

const char* const kCurveColumns = "v,g_hat,ci_half_width,samples";
const char* const kConvergenceColumns = "n,trials,skipped,ks,unreachable_fraction";

}  // namespace

std::string polytope_json(const ScoreVector& w, const Polytope2D& poly, bool exact) {
  json doc;
  doc["rule"] = rule_string(w);
  doc["m"] = w.m();
  json vertices = json::array();
  json scaled = json::array();
  const double sigma = w.sigma();
  for (const Point2& v : poly.vertices) {
    vertices.push_back(point(v, exact));
    scaled.push_back({sigma * to_double(v.lambda), sigma * to_double(v.mu)});
  }
  json rays = json::array();
  for (const Point2& r : poly.rays) rays.push_back(point(r, exact));
  doc["vertices"] = vertices;
  doc["rays"] = rays;
  doc["sigma"] = sigma;
  doc["scaled_vertices"] = scaled;
  json optimal = json::array();
  json optimal_scaled = json::array();
  for (std::size_t i : possibly_optimal_vertices(poly)) {
    optimal.push_back(i);
    optimal_scaled.push_back(scaled[i]);
  }
  doc["optimal_vertices"] = optimal;
  doc["optimal_scaled"] = optimal_scaled;
  return doc.dump();
}

void write_curve_csv(std::ostream& os, const CurveHeader& header, const GwCurve& curve) {
  write_header(os, header);
  os << kCurveColumns << '\n';
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    os << format_double(curve.grid[i], 10) << ',' << format_double(curve.g_hat[i], 10) << ','
       << format_double(curve.half_width[i], 6) << ',' << curve.samples << '\n';
  }
}

CurveFile read_curve_csv(std::istream& is) {
  CurveFile file;
  file.header = read_preamble(is, kCurveColumns);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4) throw Error(Errc::kMalformedInput, "curve rows need 4 columns: '" + line + "'");
    file.v.push_back(parse_double(f[0]));
    file.g_hat.push_back(parse_double(f[1]));
    file.half_width.push_back(parse_double(f[2]));
    file.samples.push_back(parse_count(f[3]));
  }
  return file;
}

void write_convergence_csv(std::ostream& os, const CurveHeader& header, const std::vector<ConvergenceRow>& rows) {
  write_header(os, header);
  os << kConvergenceColumns << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << r.trials << ',' << r.skipped << ',' << format_double(r.ks, 10) << ','
       << format_double(r.unreachable_fraction, 10) << '\n';
  }
}

std::vector<ConvergenceRow> read_convergence_csv(std::istream& is, CurveHeader* header) {
  const CurveHeader h = read_preamble(is, kConvergenceColumns);
  if (header) *header = h;
  std::vector<ConvergenceRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw Error(Errc::kMalformedInput, "convergence rows need 5 columns: '" + line + "'");
    ConvergenceRow r;
    r.n = static_cast<std::int64_t>(parse_count(f[0]));
    r.trials = parse_count(f[1]);
    r.skipped = parse_count(f[2]);
    r.ks = parse_double(f[3]);
    r.unreachable_fraction = parse_double(f[4]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> parse_grid(std::string_view spec) {
  const auto parts = split(std::string(spec), ':');
  if (parts.size() != 3) throw Error(Errc::kMalformedInput, "grid must look like start:stop:step");
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const double step = parse_double(parts[2]);
  if (!(step > 0.0)) throw Error(Errc::kParamOutOfRange, "grid step must be positive");
  if (stop < start) throw Error(Errc::kParamOutOfRange, "grid stop lies below its start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 1'000'000) throw Error(Errc::kParamOutOfRange, "grid has too many points");
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Round to 12 significant decimals so 0.05 * 20 prints as 1.
    const double v = start + static_cast<double>(i) * step;
    grid.push_back(std::round(v * 1e12) / 1e12);
  }
  return grid;
}

}  // namespace coalition
