#pragma once

#include "edutainer/mesh/obj_io.hpp"
#include "edutainer/mesh/primitives.hpp"
#include "edutainer/pipeline/config.hpp"

namespace edutainer {

struct DemoStructure {
    std::string name;
    TriangleMesh mesh;
    Hue hue;
    double opacity = 1.0;
};

struct DemoScene {
    std::string name;
    std::vector<DemoStructure> structures;
    Json camera;
    Json render;
    Json papercraft;
};

// Disjoint union; each part keeps its own closed surface.
inline TriangleMesh merge_meshes(std::initializer_list<TriangleMesh> parts) {
    TriangleMesh out;
    for (const TriangleMesh& p : parts) {
        const int base = static_cast<int>(out.vertices.size());
        out.vertices.insert(out.vertices.end(), p.vertices.begin(), p.vertices.end());
        for (const Triangle& t : p.triangles) out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
    return out;
}

// Three nested spheres; flat ink so filtered pixels are exactly the filter colour.
inline DemoScene concentric_spheres_demo() {
    DemoScene d;
    d.name = "concentric";
    d.structures = {{"inner", icosphere(4, 0.4), Hue::Cyan, 1.0},
                    {"middle", icosphere(4, 0.7), Hue::Magenta, 1.0},
                    {"outer", icosphere(4, 1.0), Hue::Yellow, 1.0}};
    d.camera = Json{{"position", {0, 0, 4}}, {"look_at", {0, 0, 0}}, {"up", {0, 1, 0}}, {"vfov", 40}};
    d.render = Json{{"width", 512}, {"height", 512}, {"brighten_target", 0.9}, {"ambient_floor", 1.0}};
    return d;
}

// Trunk, spine and a heart-sized blob.
inline DemoScene torso_demo() {
    DemoScene d;
    d.name = "torso";
    d.structures = {{"trunk", ellipsoid(3, Vec3(0.55, 0.8, 0.35)), Hue::Yellow, 0.6},
                    {"spine", capsule(Vec3(0.0, -0.7, -0.2), Vec3(0.0, 0.7, -0.18), 0.08, 16, 6), Hue::Cyan, 1.0},
                    {"heart", icosphere(3, 0.16, Vec3(0.1, 0.3, 0.08)), Hue::Magenta, 0.9}};
    d.camera = Json{{"position", {0.6, 0.3, 3.6}}, {"look_at", {0, 0, 0}}, {"up", {0, 1, 0}}, {"vfov", 40}};
    d.render = Json{{"width", 512}, {"height", 512}, {"brighten_target", 0.9}};
    return d;
}

// Pelvic ring, bladder and both femoral heads with shafts.
inline DemoScene pelvis_demo() {
    DemoScene d;
    d.name = "pelvis";
    const TriangleMesh femurs =
        merge_meshes({capsule(Vec3(-0.45, -0.1, 0.05), Vec3(-0.6, -1.0, 0.1), 0.09, 16, 6),
                      capsule(Vec3(0.45, -0.1, 0.05), Vec3(0.6, -1.0, 0.1), 0.09, 16, 6)});
    d.structures = {{"pelvic_ring", torus(0.45, 0.12, 48, 16), Hue::Yellow, 0.7},
                    {"bladder", ellipsoid(3, Vec3(0.2, 0.16, 0.18), Vec3(0.0, 0.05, 0.1)), Hue::Magenta, 1.0},
                    {"femurs", femurs, Hue::Cyan, 1.0}};
    d.camera = Json{{"position", {0.0, 1.2, 3.2}}, {"look_at", {0, -0.3, 0}}, {"up", {0, 1, 0}}, {"vfov", 45}};
    d.render = Json{{"width", 512}, {"height", 512}, {"brighten_target", 0.9}};
    return d;
}

inline std::vector<DemoScene> all_demos() { return {concentric_spheres_demo(), torso_demo(), pelvis_demo()}; }

// Writes <dir>/<name>/{<structure>.obj, config.json} and returns the config path.
inline std::filesystem::path write_demo(const DemoScene& d, const std::filesystem::path& dir, int subdivision_level = 1,
                                        int atlas_resolution = 2048) {
    const std::filesystem::path root = dir / d.name;
    std::filesystem::create_directories(root);
    Json structures = Json::array();
    for (const DemoStructure& s : d.structures) {
        save_obj_file((root / (s.name + ".obj")).string(), s.mesh);
        structures.push_back(Json{{"path", s.name + ".obj"},
                                  {"name", s.name},
                                  {"hue", std::string(to_string(s.hue))},
                                  {"opacity", s.opacity}});
    }
    Json papercraft = d.papercraft.is_object() ? d.papercraft : Json::object();
    papercraft["subdivision_level"] = subdivision_level;
    papercraft["atlas_resolution"] = atlas_resolution;
    const Json cfg{{"structures", structures},
                   {"camera", d.camera},
                   {"render", d.render},
                   {"papercraft", papercraft},
                   {"seed", 0}};
    const std::filesystem::path path = root / "config.json";
    std::ofstream(path) << cfg.dump(2) << "\n";
    return path;
}

}  // namespace edutainer
