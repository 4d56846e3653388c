#ifndef CONORMAL_DESCRIPTORS_HPP
#define CONORMAL_DESCRIPTORS_HPP

#include <json.hpp>

#include "conormal/eigenfamily.hpp"
#include "conormal/manifold.hpp"
#include "conormal/symbol.hpp"

namespace conormal {

using Json = nlohmann::json;

/// Reject any key outside `allowed`; throw ConfigError naming the intruder.
void require_keys(const Json& j, const std::vector<std::string>& allowed,
                  const std::string& where);

/// {"manifold":"torus2","hypersurface":{"kind":"circle","axis":2,"level":0.0}}
Hypersurface hypersurface_from_json(const Json& j);
Json hypersurface_to_json(const Hypersurface& h);

/// {"family":"plane_wave","k":[1,0]}, {"family":"sphere_beam"},
/// {"family":"torus_shell","seed":17,"shell":25}, ...
EigenFamily family_from_json(const Json& j);
Json family_to_json(const EigenFamily& f);

/// {"beta_delta":0.1,"chi_alpha":0.05,"xin_power":2} on the collar of H, or
/// {"fourier":[[m1,m2,re,im],...]} with an optional {"xi_window":delta}
/// tangential factor.
Symbol symbol_from_json(const Json& j, const Hypersurface& H);

}  // namespace conormal

#endif  // CONORMAL_DESCRIPTORS_HPP
