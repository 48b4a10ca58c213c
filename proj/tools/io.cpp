#include "io.hpp"

#include <fstream>
#include <sstream>

#include "ell2/errors.hpp"

namespace ell2::io {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

namespace {

MultiIndex mi_from_json(const json& j) {
  std::vector<std::pair<int, int>> e;
  for (auto& p : j) e.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  std::sort(e.begin(), e.end());
  return MultiIndex(e);
}

json to_json(const MultiIndex& m) {
  json a = json::array();
  for (auto& [i, e] : m.entries()) a.push_back({i, e});
  return a;
}

}  // namespace

RealPoly poly_from_json(const json& j) {
  RealPoly p;
  for (auto& t : j) p.add_term(mi_from_json(t.at("x")), t.at("c").get<double>());
  return p;
}

json to_json(const RealPoly& p) {
  json a = json::array();
  for (auto& [m, c] : p.terms()) a.push_back({{"x", to_json(m)}, {"c", c}});
  return a;
}

CPoly cpoly_from_json(const json& j) {
  CPoly p;
  for (auto& t : j) {
    std::vector<std::array<int, 3>> e;
    for (auto& v : t.at("z")) e.push_back({v.at(0).get<int>(), v.at(1).get<int>(), v.at(2).get<int>()});
    std::sort(e.begin(), e.end());
    p.add(CMono(e), cplx(t.value("re", 0.0), t.value("im", 0.0)));
  }
  return p;
}

json to_json(const CPoly& p) {
  json a = json::array();
  for (auto& [m, c] : p.terms()) {
    json z = json::array();
    for (auto& e : m.entries()) z.push_back({e[0], e[1], e[2]});
    a.push_back({{"z", z}, {"re", c.real()}, {"im", c.imag()}});
  }
  return a;
}

Form form_from_json(const json& j) {
  Form f(j.at("s").get<int>(), j.at("t").get<int>());
  for (auto& c : j.at("components"))
    f.add(c.at("I").get<IndexList>(), c.at("J").get<IndexList>(), cpoly_from_json(c.at("terms")));
  return f;
}

json to_json(const Form& f) {
  json comps = json::array();
  for (auto& [k, p] : f.terms) comps.push_back({{"I", k.first}, {"J", k.second}, {"terms", to_json(p)}});
  return {{"s", f.s}, {"t", f.t}, {"components", comps}};
}

MonomialSeries<double> series_from_json(const json& j, int cap) {
  MonomialSeries<double> s(cap);
  for (auto& t : j) s.add({t.value("t", 0), mi_from_json(t.value("x", json::array()))}, t.at("c").get<double>());
  return s;
}

json to_json(const MonomialSeries<double>& s) {
  json a = json::array();
  for (auto& [k, c] : s.terms()) a.push_back({{"t", k.t}, {"x", to_json(k.x)}, {"c", c}});
  return a;
}

LinearCauchyProblem<double> problem_from_json(const json& j, int cap) {
  LinearCauchyProblem<double> pb;
  pb.A0 = series_from_json(j.value("A0", json::array()), cap);
  for (auto& a : j.value("A", json::array())) pb.A.emplace_back(a.at("i").get<int>(), series_from_json(a.at("series"), cap));
  pb.Phi = series_from_json(j.at("Phi"), cap);
  return pb;
}

GaussGreenDomain domain_from_json(const json& j) {
  GaussGreenDomain d;
  std::string kind = j.value("kind", "half-space");
  if (kind == "half-space") d.kind = DomainKind::HalfSpace;
  else if (kind == "ball") d.kind = DomainKind::Ball;
  else throw Error(ErrorKind::ConfigError, "unknown domain kind '" + kind + "'");
  d.dims = j.value("dims", 2);
  d.k = j.value("k", 1);
  d.center = j.value("center", std::vector<double>{});
  d.radius = j.value("radius", 1.0);
  if (d.kind == DomainKind::Ball && d.center.empty()) d.center.assign(d.dims, 0.0);
  return d;
}

GraphSurface graph_from_json(const json& j) {
  GraphSurface s;
  s.base = j.at("base").get<std::vector<long>>();
  s.comp = j.at("comp").get<std::vector<long>>();
  s.offset = j.at("offset").get<std::vector<double>>();
  s.slope = j.at("slope").get<std::vector<double>>();
  return s;
}

ChartRegion region_from_json(const json& j) {
  ChartRegion r;
  for (auto& e : j) r.push_back({e.at("index").get<int>(), e.at("lo").get<double>(), e.at("hi").get<double>()});
  return r;
}

}  // namespace ell2::io
