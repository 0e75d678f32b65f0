#pragma once

#include "edutainer/color/color.hpp"
#include "edutainer/papercraft/print_sheet.hpp"
#include "edutainer/render/camera.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>

namespace edutainer {

using Json = nlohmann::json;

struct StructureConfig {
    std::string path;  // as written in the config
    std::filesystem::path resolved;
    Hue hue = Hue::Cyan;
    double opacity = 1.0;
    std::size_t decimate_target = 100000;
    std::string name;
};

struct RenderConfig {
    int width = 512;
    int height = 512;
    double brighten_target = 0.9;
    double ambient_floor = 0.25;
    int threads = 1;
};

struct PapercraftConfig {
    int subdivision_level = 1;
    int smoothing_iters = 0;
    int atlas_resolution = 2048;
    double wrap_offset = 0.0;
    int unfold_attempts = 32;
    PageSpec page;
};

struct ProjectConfig {
    std::vector<StructureConfig> structures;
    Camera camera;  // width/height mirror render.width/height
    RenderConfig render;
    PapercraftConfig papercraft;
    std::uint32_t seed = 0;
    std::filesystem::path base_dir;  // structure paths resolve against this
};

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
    }
}

inline const Json& object_at(const Json& parent, const char* key, const std::string& field) {
    const Json& v = parent.at(key);
    if (!v.is_object()) throw ConfigError(field, "must be an object");
    return v;
}

inline double number(const Json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
    return d;
}

inline long long integer(const Json& v, const std::string& field) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(field, "must be an integer");
    return v.get<long long>();
}

inline Vec3 vec3(const Json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(field, "must be an array of three numbers");
    return Vec3(number(v[0], field + "[0]"), number(v[1], field + "[1]"), number(v[2], field + "[2]"));
}

inline Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

}  // namespace detail

// Camera fields accepted in the config and by the preview service.
inline void apply_camera_json(Camera& cam, const Json& j, const std::string& where) {
    detail::reject_unknown(j, where, {"position", "look_at", "up", "vfov", "near", "far", "projection", "ortho_height"});
    if (j.contains("position")) cam.position = detail::vec3(j["position"], where + ".position");
    if (j.contains("look_at")) cam.look_at = detail::vec3(j["look_at"], where + ".look_at");
    if (j.contains("up")) cam.up = detail::vec3(j["up"], where + ".up");
    if (j.contains("vfov")) cam.vfov = detail::number(j["vfov"], where + ".vfov");
    if (j.contains("near")) cam.near = detail::number(j["near"], where + ".near");
    if (j.contains("far")) cam.far = detail::number(j["far"], where + ".far");
    if (j.contains("ortho_height")) cam.ortho_height = detail::number(j["ortho_height"], where + ".ortho_height");
    if (j.contains("projection")) {
        const Json& p = j["projection"];
        if (p == "perspective")
            cam.projection = Projection::Perspective;
        else if (p == "orthographic")
            cam.projection = Projection::Orthographic;
        else
            throw ConfigError(where + ".projection", "must be \"perspective\" or \"orthographic\"");
    }
    try {
        cam.check();
    } catch (const InvalidArgument& e) {
        throw ConfigError(where, e.what());
    }
}

inline Json camera_json(const Camera& cam) {
    return Json{{"position", detail::vec3_json(cam.position)},
                {"look_at", detail::vec3_json(cam.look_at)},
                {"up", detail::vec3_json(cam.up)},
                {"vfov", cam.vfov},
                {"near", cam.near},
                {"far", cam.far},
                {"projection", cam.projection == Projection::Perspective ? "perspective" : "orthographic"},
                {"ortho_height", cam.ortho_height}};
}

// Validates 1-3 structures with distinct hues and opacities in [0,1].
inline void check_structures(const std::vector<StructureConfig>& s) {
    if (s.empty()) throw ConfigError("structures", "at least one structure is required");
    if (s.size() > 3) throw ConfigError("structures", "at most three structures are supported");
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string f = "structures[" + std::to_string(i) + "]";
        if (!(s[i].opacity >= 0.0 && s[i].opacity <= 1.0)) throw ConfigError(f + ".opacity", "must be in [0,1]");
        for (std::size_t j = 0; j < i; ++j)
            if (s[i].hue == s[j].hue)
                throw ConfigError(f + ".hue", "duplicate hue '" + std::string(to_string(s[i].hue)) + "'");
    }
}

inline ProjectConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {}) {
    using detail::integer;
    using detail::number;
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    detail::reject_unknown(j, "", {"structures", "camera", "render", "papercraft", "seed"});
    ProjectConfig cfg;
    cfg.base_dir = base_dir;

    if (!j.contains("structures") || !j["structures"].is_array())
        throw ConfigError("structures", "must be an array");
    const Json& list = j["structures"];
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string f = "structures[" + std::to_string(i) + "]";
        const Json& s = list[i];
        if (!s.is_object()) throw ConfigError(f, "must be an object");
        detail::reject_unknown(s, f, {"path", "hue", "opacity", "decimate_target", "name"});
        StructureConfig sc;
        if (!s.contains("path") || !s["path"].is_string()) throw ConfigError(f + ".path", "must be a string");
        sc.path = s["path"].get<std::string>();
        const std::filesystem::path p(sc.path);
        sc.resolved = p.is_absolute() ? p : base_dir / p;
        if (!std::filesystem::is_regular_file(sc.resolved))
            throw ConfigError(f + ".path", "file not found: " + sc.resolved.string());
        if (!s.contains("hue") || !s["hue"].is_string()) throw ConfigError(f + ".hue", "must be a string");
        const auto hue = parse_hue(s["hue"].get<std::string>());
        if (!hue) throw ConfigError(f + ".hue", "must be one of cyan, magenta, yellow");
        sc.hue = *hue;
        if (s.contains("opacity")) sc.opacity = number(s["opacity"], f + ".opacity");
        if (s.contains("decimate_target")) {
            const long long t = integer(s["decimate_target"], f + ".decimate_target");
            if (t < 4) throw ConfigError(f + ".decimate_target", "must be >= 4");
            sc.decimate_target = static_cast<std::size_t>(t);
        }
        if (s.contains("name")) {
            if (!s["name"].is_string()) throw ConfigError(f + ".name", "must be a string");
            sc.name = s["name"].get<std::string>();
        } else {
            sc.name = p.stem().string();
        }
        cfg.structures.push_back(std::move(sc));
    }
    check_structures(cfg.structures);

    if (j.contains("render")) {
        const Json& r = detail::object_at(j, "render", "render");
        detail::reject_unknown(r, "render", {"width", "height", "brighten_target", "ambient_floor", "threads"});
        if (r.contains("width")) cfg.render.width = static_cast<int>(integer(r["width"], "render.width"));
        if (r.contains("height")) cfg.render.height = static_cast<int>(integer(r["height"], "render.height"));
        if (r.contains("brighten_target")) cfg.render.brighten_target = number(r["brighten_target"], "render.brighten_target");
        if (r.contains("ambient_floor")) cfg.render.ambient_floor = number(r["ambient_floor"], "render.ambient_floor");
        if (r.contains("threads")) cfg.render.threads = static_cast<int>(integer(r["threads"], "render.threads"));
    }
    if (cfg.render.width < 1 || cfg.render.width > 16384) throw ConfigError("render.width", "must be in [1,16384]");
    if (cfg.render.height < 1 || cfg.render.height > 16384) throw ConfigError("render.height", "must be in [1,16384]");
    if (!(cfg.render.brighten_target > 0.0 && cfg.render.brighten_target <= 1.0))
        throw ConfigError("render.brighten_target", "must be in (0,1]");
    if (!(cfg.render.ambient_floor >= 0.0 && cfg.render.ambient_floor <= 1.0))
        throw ConfigError("render.ambient_floor", "must be in [0,1]");
    if (cfg.render.threads < 1 || cfg.render.threads > 256) throw ConfigError("render.threads", "must be in [1,256]");

    if (j.contains("camera")) apply_camera_json(cfg.camera, detail::object_at(j, "camera", "camera"), "camera");
    cfg.camera.width = cfg.render.width;
    cfg.camera.height = cfg.render.height;

    if (j.contains("papercraft")) {
        const Json& p = detail::object_at(j, "papercraft", "papercraft");
        detail::reject_unknown(p, "papercraft", {"subdivision_level", "smoothing_iters", "atlas_resolution", "page",
                                                 "wrap_offset", "unfold_attempts"});
        PapercraftConfig& pc = cfg.papercraft;
        if (p.contains("subdivision_level"))
            pc.subdivision_level = static_cast<int>(integer(p["subdivision_level"], "papercraft.subdivision_level"));
        if (p.contains("smoothing_iters"))
            pc.smoothing_iters = static_cast<int>(integer(p["smoothing_iters"], "papercraft.smoothing_iters"));
        if (p.contains("atlas_resolution"))
            pc.atlas_resolution = static_cast<int>(integer(p["atlas_resolution"], "papercraft.atlas_resolution"));
        if (p.contains("wrap_offset")) pc.wrap_offset = number(p["wrap_offset"], "papercraft.wrap_offset");
        if (p.contains("unfold_attempts"))
            pc.unfold_attempts = static_cast<int>(integer(p["unfold_attempts"], "papercraft.unfold_attempts"));
        if (p.contains("page")) {
            const Json& pg = detail::object_at(p, "page", "papercraft.page");
            detail::reject_unknown(pg, "papercraft.page", {"width_mm", "height_mm", "margin_mm", "scale", "auto_scale"});
            if (pg.contains("width_mm")) pc.page.width_mm = number(pg["width_mm"], "papercraft.page.width_mm");
            if (pg.contains("height_mm")) pc.page.height_mm = number(pg["height_mm"], "papercraft.page.height_mm");
            if (pg.contains("margin_mm")) pc.page.margin_mm = number(pg["margin_mm"], "papercraft.page.margin_mm");
            if (pg.contains("scale")) pc.page.scale = number(pg["scale"], "papercraft.page.scale");
            if (pg.contains("auto_scale")) {
                if (!pg["auto_scale"].is_boolean()) throw ConfigError("papercraft.page.auto_scale", "must be a boolean");
                pc.page.auto_scale = pg["auto_scale"].get<bool>();
            }
        }
    }
    const PapercraftConfig& pc = cfg.papercraft;
    if (pc.subdivision_level < 0 || pc.subdivision_level > 5)
        throw ConfigError("papercraft.subdivision_level", "must be in [0,5]");
    if (pc.smoothing_iters < 0) throw ConfigError("papercraft.smoothing_iters", "must be >= 0");
    if (pc.atlas_resolution < 64 || pc.atlas_resolution > 8192 ||
        (pc.atlas_resolution & (pc.atlas_resolution - 1)) != 0)
        throw ConfigError("papercraft.atlas_resolution", "must be a power of two in [64,8192]");
    if (pc.wrap_offset < 0.0) throw ConfigError("papercraft.wrap_offset", "must be >= 0");
    if (pc.unfold_attempts < 1) throw ConfigError("papercraft.unfold_attempts", "must be >= 1");
    if (!(pc.page.width_mm > 2.0 * pc.page.margin_mm && pc.page.height_mm > 2.0 * pc.page.margin_mm &&
          pc.page.margin_mm >= 0.0))
        throw ConfigError("papercraft.page", "margins leave no printable area");
    if (pc.page.scale < 0.0) throw ConfigError("papercraft.page.scale", "must be >= 0");

    if (j.contains("seed")) {
        const long long s = integer(j["seed"], "seed");
        if (s < 0 || s > 0xFFFFFFFFLL) throw ConfigError("seed", "must be in [0, 2^32)");
        cfg.seed = static_cast<std::uint32_t>(s);
    }
    return cfg;
}

inline ProjectConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("", "invalid JSON in " + path.string() + ": " + e.what());
    }
    return parse_config(j, std::filesystem::absolute(path).parent_path());
}

// Config echo with the same key set as the input format.
inline Json config_json(const ProjectConfig& cfg) {
    Json structures = Json::array();
    for (const StructureConfig& s : cfg.structures)
        structures.push_back(Json{{"path", s.path},
                                  {"hue", std::string(to_string(s.hue))},
                                  {"opacity", s.opacity},
                                  {"decimate_target", s.decimate_target},
                                  {"name", s.name}});
    Json cam = camera_json(cfg.camera);
    const PapercraftConfig& pc = cfg.papercraft;
    return Json{{"structures", structures},
                {"camera", cam},
                {"render",
                 {{"width", cfg.render.width},
                  {"height", cfg.render.height},
                  {"brighten_target", cfg.render.brighten_target},
                  {"ambient_floor", cfg.render.ambient_floor},
                  {"threads", cfg.render.threads}}},
                {"papercraft",
                 {{"subdivision_level", pc.subdivision_level},
                  {"smoothing_iters", pc.smoothing_iters},
                  {"atlas_resolution", pc.atlas_resolution},
                  {"wrap_offset", pc.wrap_offset},
                  {"unfold_attempts", pc.unfold_attempts},
                  {"page",
                   {{"width_mm", pc.page.width_mm},
                    {"height_mm", pc.page.height_mm},
                    {"margin_mm", pc.page.margin_mm},
                    {"scale", pc.page.scale},
                    {"auto_scale", pc.page.auto_scale}}}}},
                {"seed", cfg.seed}};
}

}  // namespace edutainer
