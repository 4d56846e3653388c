#include "conormal/descriptors.hpp"

#include <algorithm>

namespace conormal {

void require_keys(const Json& j, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

Hypersurface hypersurface_from_json(const Json& j) {
  require_keys(j, {"manifold", "hypersurface"}, "geometry");
  const std::string manifold = j.at("manifold").get<std::string>();
  const Json& h = j.at("hypersurface");
  const std::string kind = h.at("kind").get<std::string>();
  if (manifold == "torus2") {
    if (kind == "circle") {
      require_keys(h, {"kind", "axis", "level"}, "hypersurface");
      return Hypersurface::torus_circle(h.at("axis").get<int>(),
                                        h.at("level").get<Real>());
    }
    if (kind == "geodesic") {
      require_keys(h, {"kind", "p", "q", "base"}, "hypersurface");
      Vec2 base(0, 0);
      if (h.contains("base"))
        base = Vec2(h.at("base").at(0).get<Real>(),
                    h.at("base").at(1).get<Real>());
      return Hypersurface::torus_geodesic(h.at("p").get<int>(),
                                          h.at("q").get<int>(), base);
    }
    throw ConfigError("geometry: unknown torus hypersurface kind \"" + kind +
                      "\"");
  }
  if (manifold == "sphere2") {
    if (kind == "equator") {
      require_keys(h, {"kind"}, "hypersurface");
      return Hypersurface::sphere_equator();
    }
    if (kind == "latitude") {
      require_keys(h, {"kind", "omega"}, "hypersurface");
      return Hypersurface::sphere_latitude(h.at("omega").get<Real>());
    }
    if (kind == "meridian") {
      require_keys(h, {"kind", "theta"}, "hypersurface");
      return Hypersurface::sphere_meridian(h.at("theta").get<Real>());
    }
    if (kind == "great_circle") {
      require_keys(h, {"kind", "a", "b"}, "hypersurface");
      auto vec3 = [](const Json& v) {
        return Vec3(v.at(0).get<Real>(), v.at(1).get<Real>(),
                    v.at(2).get<Real>());
      };
      return Hypersurface::sphere_great_circle(vec3(h.at("a")),
                                               vec3(h.at("b")));
    }
    throw ConfigError("geometry: unknown sphere hypersurface kind \"" + kind +
                      "\"");
  }
  throw ConfigError("geometry: unknown manifold \"" + manifold + "\"");
}

Json hypersurface_to_json(const Hypersurface& h) {
  Json out;
  switch (h.kind) {
    case HypersurfaceKind::TorusCircle:
      out = {{"manifold", "torus2"},
             {"hypersurface",
              {{"kind", "circle"}, {"axis", h.axis}, {"level", h.level}}}};
      break;
    case HypersurfaceKind::TorusGeodesic:
      out = {{"manifold", "torus2"},
             {"hypersurface",
              {{"kind", "geodesic"},
               {"p", h.direction[0]},
               {"q", h.direction[1]},
               {"base", {h.base[0], h.base[1]}}}}};
      break;
    case HypersurfaceKind::SphereLatitude:
      out = {{"manifold", "sphere2"},
             {"hypersurface", {{"kind", "latitude"}, {"omega", h.omega0}}}};
      break;
    case HypersurfaceKind::SphereGreatCircle:
      out = {{"manifold", "sphere2"},
             {"hypersurface",
              {{"kind", "great_circle"},
               {"a", {h.frame_a[0], h.frame_a[1], h.frame_a[2]}},
               {"b", {h.frame_b[0], h.frame_b[1], h.frame_b[2]}}}}};
      break;
  }
  return out;
}

EigenFamily family_from_json(const Json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "plane_wave") {
    require_keys(j, {"family", "k"}, "family");
    return EigenFamily::torus_plane_wave(
        Vec2i(j.at("k").at(0).get<int>(), j.at("k").at(1).get<int>()));
  }
  if (family == "superposition") {
    require_keys(j, {"family", "modes"}, "family");
    std::vector<std::pair<Vec2i, Complex>> modes;
    for (const auto& m : j.at("modes")) {
      require_keys(m, {"k", "re", "im"}, "family.modes");
      modes.push_back({Vec2i(m.at("k").at(0).get<int>(),
                             m.at("k").at(1).get<int>()),
                       Complex(m.at("re").get<Real>(),
                               m.value("im", 0.0))});
    }
    return EigenFamily::torus_superposition(std::move(modes));
  }
  if (family == "sphere_zonal") {
    require_keys(j, {"family"}, "family");
    return EigenFamily::sphere_zonal();
  }
  if (family == "sphere_beam") {
    require_keys(j, {"family"}, "family");
    return EigenFamily::sphere_gaussian_beam();
  }
  if (family == "torus_shell") {
    require_keys(j, {"family", "seed", "shell", "schedule"}, "family");
    std::vector<long long> schedule;
    if (j.contains("schedule"))
      for (const auto& n : j.at("schedule"))
        schedule.push_back(n.get<long long>());
    else if (j.contains("shell"))
      schedule.push_back(j.at("shell").get<long long>());
    return EigenFamily::torus_random_shell(j.at("seed").get<std::uint64_t>(),
                                           std::move(schedule));
  }
  throw ConfigError("family: unknown family \"" + family + "\"");
}

Json family_to_json(const EigenFamily& f) {
  Json out;
  switch (f.kind()) {
    case FamilyKind::TorusPlaneWave:
      out = {{"family", "plane_wave"}};
      break;
    case FamilyKind::TorusSuperposition:
      out = {{"family", "superposition"}};
      break;
    case FamilyKind::SphereZonal:
      out = {{"family", "sphere_zonal"}};
      break;
    case FamilyKind::SphereGaussianBeam:
      out = {{"family", "sphere_beam"}};
      break;
    case FamilyKind::TorusRandomShell:
      out = {{"family", "torus_shell"}, {"seed", f.seed()}};
      break;
  }
  return out;
}

Symbol symbol_from_json(const Json& j, const Hypersurface& H) {
  if (j.contains("beta_delta")) {
    require_keys(j, {"beta_delta", "chi_alpha", "xin_power"}, "symbol");
    return collar_symbol(H, j.at("beta_delta").get<Real>(),
                         j.at("chi_alpha").get<Real>(),
                         j.value("xin_power", 0));
  }
  require_keys(j, {"fourier", "xi_window"}, "symbol");
  Symbol a;
  for (const auto& row : j.at("fourier")) {
    const Vec2i m(row.at(0).get<int>(), row.at(1).get<int>());
    const Complex c(row.at(2).get<Real>(),
                    row.size() > 3 ? row.at(3).get<Real>() : 0.0);
    if (j.contains("xi_window")) {
      const PlateauCutoff w = chi_delta(j.at("xi_window").get<Real>());
      a.add_mode(m, [c, w](const Vec2& xi) { return c * w(xi.norm()); });
    } else {
      a.add_mode(m, [c](const Vec2&) { return c; });
    }
  }
  return a;
}

}  // namespace conormal
