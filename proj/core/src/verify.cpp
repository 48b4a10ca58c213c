#include "ell2/verify.hpp"

#include <boost/uuid/detail/sha1.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ell2/errors.hpp"
#include "json.hpp"
#include "suites.hpp"

namespace ell2 {

using nlohmann::json;

void RunConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::ConfigError, m); };
  if (weight_count < 1) bad("weight_count must be positive");
  if (!(weight_ratio > 0.0 && weight_ratio < 1.0)) bad("weight_ratio must lie in (0, 1)");
  if (dims < 1) bad("dims must be positive");
  if (fernique_samples < 1 || cutoff_samples < 1 || gauss_green_samples < 1) bad("sample sizes must be positive");
  if (format != "csv" && format != "json") bad("format must be csv or json");
  for (auto& s : suites) {
    if (s == "all") continue;
    bool known = false;
    for (auto& n : suite_names()) known = known || n == s;
    if (!known) bad("unknown suite '" + s + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  RunConfig c;
  try {
    for (auto& [k, v] : j.items()) {
      if (k == "weight_count") c.weight_count = v.get<int>();
      else if (k == "weight_ratio") c.weight_ratio = v.get<double>();
      else if (k == "dims") c.dims = v.get<int>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "fernique_samples") c.fernique_samples = v.get<long>();
      else if (k == "cutoff_samples") c.cutoff_samples = v.get<long>();
      else if (k == "gauss_green_samples") c.gauss_green_samples = v.get<long>();
      else if (k == "suites") c.suites = v.get<std::vector<std::string>>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else throw Error(ErrorKind::ConfigError, "unknown key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  c.validate();
  return c;
}

std::string to_json(const RunConfig& c) {
  json j = {{"weight_count", c.weight_count},
            {"weight_ratio", c.weight_ratio},
            {"dims", c.dims},
            {"seed", c.seed},
            {"fernique_samples", c.fernique_samples},
            {"cutoff_samples", c.cutoff_samples},
            {"gauss_green_samples", c.gauss_green_samples},
            {"suites", c.suites},
            {"out", c.out},
            {"format", c.format}};
  return j.dump(2);
}

void apply_env_overrides(RunConfig& c) {
  if (const char* s = std::getenv("ELL2_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0') throw Error(ErrorKind::ConfigError, "ELL2_SEED is not an unsigned integer");
    c.seed = v;
  }
}

double Record::value(const std::string& name) const {
  for (auto& v : values)
    if (v.name == name) return v.value;
  return std::nan("");
}

bool Report::all_pass() const {
  for (auto& r : records)
    if (!r.pass) return false;
  return true;
}

std::string Report::digest() const { return sha1_hex(to_csv(*this)); }

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"measure", "cutoff", "surface", "dbar", "ck", "sobolev", "determinism"};
  return names;
}

Report run_suite(const RunConfig& cfg) {
  cfg.validate();
  static const std::map<std::string, std::function<std::vector<Record>(const RunConfig&)>> table{
      {"measure", suites::measure}, {"cutoff", suites::cutoff}, {"surface", suites::surface},
      {"dbar", suites::dbar},       {"ck", suites::ck},         {"sobolev", suites::sobolev},
      {"determinism", suites::determinism}};
  bool all = false;
  for (auto& s : cfg.suites) all = all || s == "all";
  Report rep;
  for (auto& name : suite_names()) {
    bool chosen = all;
    for (auto& s : cfg.suites) chosen = chosen || s == name;
    if (!chosen) continue;
    auto t0 = std::chrono::steady_clock::now();
    try {
      for (auto& r : table.at(name)(cfg)) rep.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      Record r;
      r.suite = name;
      r.check = "suite-error";
      r.anchor = "suite completed without exceptions";
      r.detail = e.what();
      r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rep.records.push_back(std::move(r));
    }
  }
  return rep;
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt_double(v);
}

double from_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  std::string s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return std::nan("");
}

}  // namespace

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "suite,check,anchor,inputs_digest,values,tolerance,pass,detail\n";
  for (auto& rec : r.records) {
    std::string vals;
    for (std::size_t i = 0; i < rec.values.size(); ++i) {
      if (i) vals += ";";
      vals += rec.values[i].name + "=" + fmt_double(rec.values[i].value);
    }
    os << csv_field(rec.suite) << ',' << csv_field(rec.check) << ',' << csv_field(rec.anchor) << ','
       << rec.inputs_digest << ',' << csv_field(vals) << ',' << fmt_double(rec.tolerance) << ','
       << (rec.pass ? "pass" : "fail") << ',' << csv_field(rec.detail) << '\n';
  }
  return os.str();
}

std::string to_json(const Report& r) {
  json arr = json::array();
  for (auto& rec : r.records) {
    json vals = json::array();
    for (auto& v : rec.values) vals.push_back({{"name", v.name}, {"value", num(v.value)}});
    arr.push_back({{"suite", rec.suite},
                   {"check", rec.check},
                   {"anchor", rec.anchor},
                   {"inputs_digest", rec.inputs_digest},
                   {"values", vals},
                   {"tolerance", num(rec.tolerance)},
                   {"pass", rec.pass},
                   {"detail", rec.detail}});
  }
  return json{{"records", arr}}.dump(2);
}

Report report_from_json(const std::string& text) {
  Report r;
  try {
    json j = json::parse(text);
    for (auto& e : j.at("records")) {
      Record rec;
      rec.suite = e.at("suite").get<std::string>();
      rec.check = e.at("check").get<std::string>();
      rec.anchor = e.at("anchor").get<std::string>();
      rec.inputs_digest = e.at("inputs_digest").get<std::string>();
      for (auto& v : e.at("values")) rec.values.push_back({v.at("name").get<std::string>(), from_num(v.at("value"))});
      rec.tolerance = from_num(e.at("tolerance"));
      rec.pass = e.at("pass").get<bool>();
      rec.detail = e.at("detail").get<std::string>();
      r.records.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed report: ") + e.what());
  }
  return r;
}

void emit(const Report& r, const std::string& path, const std::string& format) {
  std::string body;
  if (format == "csv") body = to_csv(r);
  else if (format == "json") body = to_json(r);
  else throw Error(ErrorKind::ConfigError, "format must be csv or json");

  auto write = [](const std::string& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorKind::IoError, "cannot open " + p);
    f << text;
    if (!f) throw Error(ErrorKind::IoError, "write failed for " + p);
  };
  write(path, body);

  std::ostringstream t;
  t << "suite,check,wall_seconds\n";
  for (auto& rec : r.records) t << rec.suite << ',' << rec.check << ',' << fmt_double(rec.wall_seconds) << '\n';
  write(path + ".timing.csv", t.str());
}

std::string sha1_hex(const std::string& data) {
  boost::uuids::detail::sha1 h;
  h.process_bytes(data.data(), data.size());
  boost::uuids::detail::sha1::digest_type d;
  h.get_digest(d);
  char buf[41];
  for (int i = 0; i < 5; ++i) std::snprintf(buf + 8 * i, 9, "%08x", d[i]);
  return std::string(buf, 40);
}

}  // namespace ell2
