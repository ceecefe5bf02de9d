#ifndef SMTLAB_TOOLS_SCENE_HPP
#define SMTLAB_TOOLS_SCENE_HPP

#include <smtlab/family.hpp>
#include <smtlab/nevanlinna.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace smtlab::cli
{

using json = nlohmann::json;

inline constexpr int scene_version = 1;

struct Scene {
    std::string path;
    std::size_t ambient = 0;
    std::vector<Poly> variety;
    bool smooth = false;
    std::vector<Poly> family;
    std::optional<int> N;
    std::optional<empty_convention> convention;
    std::optional<Rational> eps;
    json hilbert;
    json curve;
    json points;

    Variety make_variety(const GroebnerBudget &budget) const;
};

// Reads and validates a scene; every problem is a schema_error naming the
// JSON path and the scene file.
Scene load_scene(const std::string &path);

// Helpers shared with the command implementations. `where` is a JSON
// pointer used in error messages.
Rational rational_of(const json &j, const std::string &where);
std::vector<int> int_list(const json &j, const std::string &where);
std::vector<int> parse_int_list(const std::string &text, const std::string &where);

// "a:b:steps,log" or "a:b:steps,lin".
std::vector<double> parse_grid(const std::string &text);

Domain parse_domain(const json &j, const std::string &where);

} // namespace smtlab::cli

#endif
