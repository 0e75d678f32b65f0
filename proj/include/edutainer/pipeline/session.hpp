#pragma once

#include "edutainer/pipeline/pipeline.hpp"
#include "edutainer/pipeline/zip.hpp"

#include <array>
#include <memory>
#include <mutex>

namespace edutainer {

enum class PreviewView { Composite, Atlas, Folded };

inline std::string_view to_string(PreviewView v) {
    switch (v) {
        case PreviewView::Composite: return "composite";
        case PreviewView::Atlas: return "atlas";
        case PreviewView::Folded: return "folded";
    }
    return "?";
}

inline std::optional<PreviewView> parse_view(std::string_view s) {
    for (PreviewView v : {PreviewView::Composite, PreviewView::Atlas, PreviewView::Folded})
        if (s == to_string(v)) return v;
    return std::nullopt;
}

inline constexpr std::uint32_t kIdmapBackground = 0xFFFFFF;

// Triangle ids of `mesh` as seen by `cam`, one 24-bit id per pixel (R high byte).
inline Rgb8Image render_idmap(const TriangleMesh& mesh, const Camera& cam, int threads = 1) {
    if (mesh.triangles.size() >= kIdmapBackground) throw InvalidArgument("idmap: too many triangles for 24-bit ids");
    const SampleBuffer vis = rasterize_nearest(mesh, cam, threads, true);
    Rgb8Image img{cam.width, cam.height, std::vector<std::uint8_t>(vis.samples.size() * 3)};
    for (std::size_t i = 0; i < vis.samples.size(); ++i) {
        const auto id = vis.samples[i].triangle < 0 ? kIdmapBackground : static_cast<std::uint32_t>(vis.samples[i].triangle);
        img.data[3 * i] = static_cast<std::uint8_t>(id >> 16);
        img.data[3 * i + 1] = static_cast<std::uint8_t>(id >> 8);
        img.data[3 * i + 2] = static_cast<std::uint8_t>(id);
    }
    return img;
}

inline std::uint32_t decode_id(const std::array<std::uint8_t, 3>& px) {
    return (std::uint32_t{px[0]} << 16) | (std::uint32_t{px[1]} << 8) | px[2];
}

// Everything a reader can see for one revision. Immutable once published;
// PNG encodings are produced on first request.
class SessionSnapshot {
public:
    SessionSnapshot(long revision, Json state, CompositeImage composite, CompositeImage atlas, CompositeImage folded,
                    Rgb8Image idmap)
        : revision_(revision), state_(std::move(state)) {
        images_[0] = std::move(composite);
        images_[1] = std::move(atlas);
        images_[2] = std::move(folded);
        idmap_ = std::move(idmap);
    }

    long revision() const noexcept { return revision_; }
    const Json& state() const noexcept { return state_; }
    const CompositeImage& image(PreviewView v) const { return images_[static_cast<int>(v)]; }

    const std::string& preview_png(PreviewView v, std::optional<FilterKind> f) const {
        const int slot = static_cast<int>(v) * 4 + (f ? static_cast<int>(*f) + 1 : 0);
        std::call_once(once_[slot], [&] {
            png_[slot] = encode_png(f ? filter_image(image(v), *f) : image(v));
        });
        return png_[slot];
    }

    const std::string& idmap_png() const {
        std::call_once(idmap_once_, [&] { idmap_png_ = encode_png(idmap_); });
        return idmap_png_;
    }

    const Rgb8Image& idmap() const noexcept { return idmap_; }

private:
    long revision_;
    Json state_;
    std::array<CompositeImage, 3> images_;
    Rgb8Image idmap_;
    mutable std::array<std::once_flag, 12> once_;
    mutable std::array<std::string, 12> png_;
    mutable std::once_flag idmap_once_;
    mutable std::string idmap_png_;
};

// Single-writer authoring session. Mutations run one at a time, rebuild the
// affected stages and publish a new snapshot; readers only ever see whole
// published snapshots.
class Session {
public:
    explicit Session(ProjectConfig cfg, std::filesystem::path checkpoint = {})
        : pipe_(std::move(cfg)), checkpoint_(std::move(checkpoint)) {
        std::lock_guard lock(writer_);
        publish();
    }

    std::shared_ptr<const SessionSnapshot> snapshot() const {
        std::lock_guard lock(snap_mu_);
        return snap_;
    }
    long revision() const { return snapshot()->revision(); }

    long set_camera(const Json& body) {
        std::lock_guard lock(writer_);
        Camera cam = pipe_.config().camera;
        apply_camera_json(cam, body, "camera");
        pipe_.set_camera(cam);
        return publish();
    }

    long set_palette(std::size_t index, Hue hue, double opacity) {
        std::lock_guard lock(writer_);
        pipe_.set_palette(index, hue, opacity);
        return publish();
    }

    long flatten(const FlattenSelection& sel) {
        std::lock_guard lock(writer_);
        pipe_.flatten(sel);
        return publish();
    }

    long undo() {
        std::lock_guard lock(writer_);
        pipe_.undo_flatten();
        return publish();
    }

    // Zip of the render3d outputs for the current state.
    std::string export_zip() {
        std::lock_guard lock(writer_);
        if (export_revision_ != revision_) {
            export_zip_ = make_zip(pipe_.run_3d());
            export_revision_ = revision_;
        }
        return export_zip_;
    }

    StageCounters counters() {
        std::lock_guard lock(writer_);
        return pipe_.counters();
    }

private:
    // Caller holds writer_.
    long publish() {
        const long rev = revision_ + (snap_ ? 1 : 0);
        const CompositeImage composite = pipe_.composite();
        const TextureAtlas atlas = pipe_.combined_atlas();
        CompositeImage folded = pipe_.folded_preview(atlas);
        const PaperMesh& uv = pipe_.uv_paper();
        Rgb8Image ids = render_idmap(uv.mesh, pipe_.config().camera, pipe_.config().render.threads);
        auto snap = std::make_shared<const SessionSnapshot>(rev, state_json(rev), composite, atlas.image,
                                                            std::move(folded), std::move(ids));
        revision_ = rev;
        write_checkpoint();
        std::lock_guard lock(snap_mu_);
        snap_ = std::move(snap);
        return rev;
    }

    Json state_json(long rev) {
        const ProjectConfig& cfg = pipe_.config();
        Json structures = Json::array();
        for (std::size_t i = 0; i < cfg.structures.size(); ++i)
            structures.push_back(Json{{"index", i},
                                      {"name", cfg.structures[i].name},
                                      {"hue", std::string(to_string(cfg.structures[i].hue))},
                                      {"opacity", cfg.structures[i].opacity},
                                      {"triangles", pipe_.mesh(i).triangle_count()}});
        const PlanarLayout& layout = pipe_.layout();
        Json history = Json::array();
        for (const FlattenStep& s : pipe_.flatten_history()) history.push_back(s.selection.triangle_ids);
        const std::string r = std::to_string(rev);
        Json previews = Json::object();
        for (PreviewView v : {PreviewView::Composite, PreviewView::Atlas, PreviewView::Folded}) {
            Json per_filter = Json::object();
            per_filter["none"] = "/api/preview?rev=" + r + "&view=" + std::string(to_string(v)) + "&filter=none";
            for (FilterKind f : kAllFilters)
                per_filter[std::string(to_string(f))] = "/api/preview?rev=" + r + "&view=" +
                                                        std::string(to_string(v)) + "&filter=" +
                                                        std::string(to_string(f));
            previews[std::string(to_string(v))] = per_filter;
        }
        return Json{{"revision", rev},
                    {"config", config_json(cfg)},
                    {"structures", structures},
                    {"paper",
                     {{"triangles", pipe_.paper().mesh.triangle_count()},
                      {"islands", layout.islands.size()},
                      {"cut_edges", layout.cut_count()},
                      {"seed", layout.seed}}},
                    {"flatten_history", history},
                    {"artifacts",
                     {{"preview", previews}, {"idmap", "/api/idmap?rev=" + r}, {"export", "/api/export"}}}};
    }

    void write_checkpoint() {
        if (checkpoint_.empty()) return;
        const ProjectConfig& cfg = pipe_.config();
        Json palette = Json::array();
        for (const StructureConfig& s : cfg.structures)
            palette.push_back(Json{{"hue", std::string(to_string(s.hue))}, {"opacity", s.opacity}});
        Json history = Json::array();
        for (const FlattenStep& s : pipe_.flatten_history()) history.push_back(s.selection.triangle_ids);
        const Json j{{"revision", revision_},
                     {"camera", camera_json(cfg.camera)},
                     {"palette", palette},
                     {"flatten_history", history},
                     {"seed", cfg.seed}};
        if (checkpoint_.has_parent_path()) std::filesystem::create_directories(checkpoint_.parent_path());
        const std::filesystem::path tmp = checkpoint_.string() + ".tmp";
        write_file(tmp.string(), j.dump(2) + "\n");
        std::filesystem::rename(tmp, checkpoint_);
    }

    Pipeline pipe_;
    std::filesystem::path checkpoint_;
    std::mutex writer_;
    long revision_ = 0;
    mutable std::mutex snap_mu_;
    std::shared_ptr<const SessionSnapshot> snap_;
    long export_revision_ = -1;
    std::string export_zip_;
};

}  // namespace edutainer
