#pragma once

#include "edutainer/mesh/decimate.hpp"
#include "edutainer/mesh/obj_io.hpp"
#include "edutainer/mesh/validate.hpp"
#include "edutainer/papercraft/papercraft.hpp"
#include "edutainer/pipeline/config.hpp"
#include "edutainer/render/png.hpp"

#include <map>
#include <optional>

namespace edutainer {

// How often each expensive stage actually ran (cache misses).
struct StageCounters {
    int mesh_loads = 0;
    int paper_builds = 0;
    int unfolds = 0;
    int uv_assignments = 0;
    int wraps = 0;
    int projections = 0;  // per structure atlas
    int renders_2d = 0;

    friend bool operator==(const StageCounters&, const StageCounters&) = default;
};

// Named output files, in a stable order.
using ArtifactSet = std::vector<std::pair<std::string, std::string>>;

inline void write_artifacts(const ArtifactSet& files, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, bytes] : files) write_file((dir / name).string(), bytes);
}

// Loads, validates, decimates and normals one structure mesh.
inline TriangleMesh load_structure_mesh(const StructureConfig& s, const std::string& field) {
    TriangleMesh mesh;
    try {
        mesh = load_obj_file(s.resolved.string());
    } catch (const ParseError& e) {
        throw ConfigError(field + ".path", s.resolved.string() + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(field + ".path", e.what());
    }
    if (mesh.empty()) throw ConfigError(field + ".path", "mesh has no triangles");
    if (!validate(mesh).closed) throw ConfigError(field + ".path", "mesh is not closed");
    if (mesh.triangle_count() > s.decimate_target) mesh = decimate(mesh, static_cast<int>(s.decimate_target));
    if (mesh.vertex_normals.empty()) mesh.vertex_normals = compute_vertex_normals(mesh);
    return mesh;
}

// Per-structure undo record of one flatten step.
struct FlattenStep {
    FlattenSelection selection;
    std::vector<std::vector<std::pair<int, Vec3>>> previous;  // structure -> (vertex, old position)
    std::vector<int> affected;                                 // triangles re-projected
};

// The four workflow stages with per-stage caches. Each cache entry carries
// the key of everything upstream of it, so a change reruns only the stages
// that depend on it.
class Pipeline {
public:
    explicit Pipeline(ProjectConfig cfg) : cfg_(std::move(cfg)) {}

    const ProjectConfig& config() const noexcept { return cfg_; }
    const StageCounters& counters() const noexcept { return counters_; }
    const std::vector<FlattenStep>& flatten_history() const noexcept { return history_; }

    // Replaces the config. Cached stages whose inputs are unchanged survive.
    void set_config(ProjectConfig cfg) {
        check_structures(cfg.structures);
        cfg.camera.check();
        cfg_ = std::move(cfg);
    }
    void set_camera(const Camera& cam) {
        Camera c = cam;
        c.width = cfg_.render.width;
        c.height = cfg_.render.height;
        c.check();
        cfg_.camera = c;
    }
    void set_palette(std::size_t index, Hue hue, double opacity) {
        if (index >= cfg_.structures.size())
            throw ConfigError("structure_index", "no structure " + std::to_string(index));
        std::vector<StructureConfig> next = cfg_.structures;
        next[index].hue = hue;
        next[index].opacity = opacity;
        check_structures(next);
        cfg_.structures = std::move(next);
    }

    // Stage 1: data transformation.
    std::vector<Structure> scene() {
        std::vector<Structure> out;
        for (std::size_t i = 0; i < cfg_.structures.size(); ++i) {
            const StructureConfig& s = cfg_.structures[i];
            out.push_back(Structure{mesh(i), s.hue, s.opacity, s.name});
        }
        return out;
    }

    const TriangleMesh& mesh(std::size_t i) {
        const StructureConfig& s = cfg_.structures.at(i);
        const std::string key = s.resolved.string() + "|" + std::to_string(s.decimate_target);
        auto it = meshes_.find(key);
        if (it == meshes_.end()) {
            ++counters_.mesh_loads;
            it = meshes_.emplace(key, load_structure_mesh(s, "structures[" + std::to_string(i) + "]")).first;
        }
        return it->second;
    }

    // Stage 2: 2D visual mapping and rendering.
    RenderOptions render_options() const {
        RenderOptions o;
        o.lighting.ambient_floor = cfg_.render.ambient_floor;
        o.threads = cfg_.render.threads;
        return o;
    }

    // Unbrightened product of the peeled fragments.
    const CompositeImage& raw_composite() {
        const std::string key = scene_key() + camera_json(cfg_.camera).dump() + render_key();
        if (!raw_2d_ || raw_2d_->first != key) {
            ++counters_.renders_2d;
            const auto s = scene();
            check_scene(s);
            raw_2d_.emplace(key, composite_fragments(depth_peel(s, cfg_.camera, render_options())));
        }
        return raw_2d_->second;
    }

    CompositeImage composite() { return brighten(raw_composite(), cfg_.render.brighten_target); }

    ArtifactSet run_2d() {
        const CompositeImage img = composite();
        ArtifactSet out{{"composite.png", encode_png(img)}};
        for (FilterKind f : kAllFilters)
            out.emplace_back("filtered_" + std::string(to_string(f)) + ".png", encode_png(filter_image(img, f)));
        return out;
    }

    // Stage 3: presentation mapping (paper mesh, net, UV layout).
    const PaperMesh& paper() {
        const std::string key = paper_key();
        if (!paper_ || paper_->first != key) {
            ++counters_.paper_builds;
            std::vector<TriangleMesh> meshes;
            for (std::size_t i = 0; i < cfg_.structures.size(); ++i) meshes.push_back(mesh(i));
            paper_.emplace(key, generate_paper_mesh(meshes, cfg_.papercraft.subdivision_level, wrap_options()));
        }
        return paper_->second;
    }

    const PlanarLayout& layout() {
        const std::string key = layout_key();
        if (!layout_ || layout_->first != key) {
            const PaperMesh& p = paper();
            ++counters_.unfolds;
            UnfoldOptions opt;
            opt.attempts = cfg_.papercraft.unfold_attempts;
            opt.seed = cfg_.seed;
            layout_.emplace(key, unfold(p, opt));
        }
        return layout_->second;
    }

    const PaperMesh& uv_paper() {
        const std::string key = layout_key() + "|" + std::to_string(cfg_.papercraft.atlas_resolution);
        if (!uv_paper_ || uv_paper_->first != key) {
            const PaperMesh& p = paper();
            const PlanarLayout& l = layout();
            ++counters_.uv_assignments;
            uv_paper_.emplace(key, assign_uv(p, l, cfg_.papercraft.atlas_resolution));
        }
        return uv_paper_->second;
    }

    // Per-structure wrapped paper meshes with the flatten history applied.
    const std::vector<WrappedPaperMesh>& wrapped() {
        const std::string key = wrap_key();
        if (!wrapped_ || wrapped_->first != key) {
            const PaperMesh& p = paper();
            std::vector<WrappedPaperMesh> out;
            for (std::size_t i = 0; i < cfg_.structures.size(); ++i) {
                ++counters_.wraps;
                out.push_back(wrap_per_structure(p, mesh(i), static_cast<int>(i), wrap_options()));
            }
            for (FlattenStep& step : history_) apply_flatten_to(out, step);
            wrapped_.emplace(key, std::move(out));
            atlases_.clear();
        }
        return wrapped_->second;
    }

    // Stage 4: per-structure textures, their combination and the print sheet.
    const TextureAtlas& structure_atlas(std::size_t i) {
        const auto& w = wrapped();
        const std::string key = atlas_key(i);
        if (atlases_.size() != cfg_.structures.size()) atlases_.assign(cfg_.structures.size(), std::nullopt);
        auto& slot = atlases_[i];
        if (!slot || slot->first != key) {
            const PaperMesh& uv = uv_paper();
            const StructureConfig& s = cfg_.structures[i];
            ++counters_.projections;
            slot.emplace(key, project_texture(w[i], Structure{mesh(i), s.hue, s.opacity, s.name}, uv,
                                              cfg_.papercraft.atlas_resolution, projection_options()));
        }
        return slot->second;
    }

    TextureAtlas combined_atlas() {
        std::vector<TextureAtlas> parts;
        for (std::size_t i = 0; i < cfg_.structures.size(); ++i) parts.push_back(structure_atlas(i));
        return combine_textures(parts, cfg_.render.brighten_target);
    }

    CompositeImage folded_preview(const TextureAtlas& combined) {
        const PaperMesh& uv = uv_paper();
        return render_textured(uv.mesh, uv.uv, combined, cfg_.camera, cfg_.render.threads);
    }

    PrintSheet print_sheet(const TextureAtlas& combined) {
        return layout_to_print_sheet(layout(), combined, cfg_.papercraft.page);
    }

    ArtifactSet run_3d() {
        const TextureAtlas combined = combined_atlas();
        const PrintSheet sheet = print_sheet(combined);
        PlanarLayout tabbed = layout();
        build_tabs(tabbed, sheet.scale);
        return {{"papercraft.svg", sheet.svg},
                {"atlas.png", encode_png(combined.image)},
                {"preview_folded.png", encode_png(folded_preview(combined))},
                {"assembly.txt", assembly_instructions(tabbed)}};
    }

    // Flattens the selected paper triangles on every wrapped mesh and
    // re-projects the triangles that share a moved vertex. Returns them.
    std::vector<int> flatten(const FlattenSelection& sel) {
        auto& w = mutable_wrapped();
        for (const WrappedPaperMesh& m : w) check_selection(m.mesh, sel);
        FlattenStep step;
        step.selection = sel;
        std::vector<WrappedPaperMesh> next = w;
        apply_flatten_to(next, step);  // throws before anything is committed
        const auto before = atlas_keys();
        w = std::move(next);
        history_.push_back(step);
        wrapped_->first = wrap_key();
        reproject(step.affected, before);
        return step.affected;
    }

    // Reverts the last flatten. Returns the re-projected triangles.
    std::vector<int> undo_flatten() {
        if (history_.empty()) throw InvalidArgument("undo: nothing to undo");
        auto& w = mutable_wrapped();
        const FlattenStep step = history_.back();
        const auto before = atlas_keys();
        for (std::size_t i = 0; i < w.size(); ++i)
            for (const auto& [v, pos] : step.previous[i]) w[i].mesh.vertices[v] = pos;
        history_.pop_back();
        wrapped_->first = wrap_key();
        reproject(step.affected, before);
        return step.affected;
    }

    void clear_flatten_history() {
        history_.clear();
        wrapped_.reset();
        atlases_.clear();
    }

private:
    WrapOptions wrap_options() const {
        return WrapOptions{cfg_.papercraft.smoothing_iters, cfg_.papercraft.wrap_offset};
    }
    ProjectionOptions projection_options() const {
        ProjectionOptions o;
        o.lighting.ambient_floor = cfg_.render.ambient_floor;
        o.threads = cfg_.render.threads;
        return o;
    }

    std::string scene_key() const {
        std::string k;
        for (const StructureConfig& s : cfg_.structures)
            k += s.resolved.string() + "|" + std::to_string(s.decimate_target) + "|" +
                 std::string(to_string(s.hue)) + "|" + Json(s.opacity).dump() + ";";
        return k;
    }
    std::string mesh_key() const {
        std::string k;
        for (const StructureConfig& s : cfg_.structures)
            k += s.resolved.string() + "|" + std::to_string(s.decimate_target) + ";";
        return k;
    }
    std::string render_key() const {
        return Json{cfg_.render.width, cfg_.render.height, cfg_.render.ambient_floor}.dump();
    }
    std::string paper_key() const {
        return mesh_key() + Json{cfg_.papercraft.subdivision_level, cfg_.papercraft.smoothing_iters,
                                 cfg_.papercraft.wrap_offset}
                                .dump();
    }
    std::string layout_key() const {
        return paper_key() + Json{cfg_.papercraft.unfold_attempts, cfg_.seed}.dump();
    }
    // History length is part of the key; the cached meshes are edited in place.
    std::string wrap_key() const { return paper_key() + "#" + std::to_string(history_.size()); }
    std::string atlas_key(std::size_t i) const {
        const StructureConfig& s = cfg_.structures[i];
        return layout_key() + wrap_key() + Json{cfg_.papercraft.atlas_resolution, std::string(to_string(s.hue)),
                                                s.opacity, cfg_.render.ambient_floor}
                                               .dump();
    }

    std::vector<WrappedPaperMesh>& mutable_wrapped() {
        wrapped();
        return wrapped_->second;
    }

    // Flattens each wrapped mesh and records the old positions in `step`.
    static void apply_flatten_to(std::vector<WrappedPaperMesh>& w, FlattenStep& step) {
        const bool record = step.previous.empty();
        if (record) step.previous.resize(w.size());
        std::set<int> moved;
        for (int t : step.selection.triangle_ids)
            for (int v : w.front().mesh.triangles.at(t)) moved.insert(v);
        for (std::size_t i = 0; i < w.size(); ++i) {
            TriangleMesh flat = flatten_selection(w[i].mesh, step.selection);
            if (record)
                for (int v : moved) step.previous[i].emplace_back(v, w[i].mesh.vertices[v]);
            w[i].mesh = std::move(flat);
        }
        if (record) {
            const TriangleMesh& m = w.front().mesh;
            for (std::size_t t = 0; t < m.triangles.size(); ++t)
                for (int v : m.triangles[t])
                    if (moved.count(v)) {
                        step.affected.push_back(static_cast<int>(t));
                        break;
                    }
        }
    }

    std::vector<std::string> atlas_keys() const {
        std::vector<std::string> k;
        for (std::size_t i = 0; i < cfg_.structures.size(); ++i) k.push_back(atlas_key(i));
        return k;
    }

    // Re-projects `triangles` in every cached atlas that was current under `before`.
    void reproject(const std::vector<int>& triangles, const std::vector<std::string>& before) {
        const auto& w = wrapped_->second;
        for (std::size_t i = 0; i < atlases_.size() && i < before.size(); ++i) {
            auto& slot = atlases_[i];
            if (!slot || slot->first != before[i]) continue;
            const std::string key = atlas_key(i);
            const StructureConfig& s = cfg_.structures[i];
            ++counters_.projections;
            reproject_triangles(slot->second, w[i], Structure{mesh(i), s.hue, s.opacity, s.name}, triangles,
                                projection_options());
            slot->first = key;
        }
    }

    ProjectConfig cfg_;
    StageCounters counters_;
    std::map<std::string, TriangleMesh> meshes_;
    std::optional<std::pair<std::string, CompositeImage>> raw_2d_;
    std::optional<std::pair<std::string, PaperMesh>> paper_;
    std::optional<std::pair<std::string, PlanarLayout>> layout_;
    std::optional<std::pair<std::string, PaperMesh>> uv_paper_;
    std::optional<std::pair<std::string, std::vector<WrappedPaperMesh>>> wrapped_;
    std::vector<std::optional<std::pair<std::string, TextureAtlas>>> atlases_;
    std::vector<FlattenStep> history_;
};

}  // namespace edutainer
