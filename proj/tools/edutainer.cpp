#include "edutainer/pipeline/demo_scenes.hpp"
#include "edutainer/pipeline/server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

namespace {

using namespace edutainer;

std::atomic<PreviewServer*> g_server{nullptr};

void on_signal(int) {
    if (PreviewServer* s = g_server.load()) s->stop();
}

ProjectConfig load(const std::string& path, std::optional<std::uint32_t> seed) {
    ProjectConfig cfg = load_config(path);
    if (seed) cfg.seed = *seed;
    return cfg;
}

void list(const ArtifactSet& files, const std::filesystem::path& out) {
    for (const auto& [name, bytes] : files) std::cout << (out / name).string() << " (" << bytes.size() << " bytes)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Filter-interactive physicalization: 2D composites and papercraft nets from CMY-inked meshes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint32_t> seed;
    int port = 8080;
    std::string host = "127.0.0.1";
    int demo_level = 1;
    int demo_resolution = 2048;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "project config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "overrides the config seed");
    };

    CLI::App* r2 = app.add_subcommand("render2d", "composite.png and the three filtered views");
    add_common(r2);
    CLI::App* r3 = app.add_subcommand("render3d", "papercraft.svg, atlas.png, preview_folded.png, assembly.txt");
    add_common(r3);
    CLI::App* sv = app.add_subcommand("serve", "local preview service");
    add_common(sv);
    sv->add_option("--port", port, "TCP port (0 picks a free one)")->capture_default_str();
    sv->add_option("--host", host, "bind address")->capture_default_str();
    CLI::App* dm = app.add_subcommand("demos", "write the bundled demo scenes (OBJ + config)");
    dm->add_option("--out", out_dir, "output directory")->capture_default_str();
    dm->add_option("--level", demo_level, "papercraft subdivision level")->capture_default_str();
    dm->add_option("--atlas", demo_resolution, "atlas resolution")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*r2) {
            Pipeline pipe(load(config_path, seed));
            const ArtifactSet files = pipe.run_2d();
            write_artifacts(files, out_dir);
            list(files, out_dir);
        } else if (*r3) {
            Pipeline pipe(load(config_path, seed));
            const ArtifactSet files = pipe.run_3d();
            write_artifacts(files, out_dir);
            list(files, out_dir);
            const PlanarLayout& layout = pipe.layout();
            std::cout << "paper mesh: " << pipe.paper().mesh.triangle_count() << " triangles, "
                      << layout.islands.size() << " island(s), " << layout.cut_count() << " cut edges\n";
        } else if (*sv) {
            Session session(load(config_path, seed), std::filesystem::path(out_dir) / "session.json");
            PreviewServer server(session);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "serving on http://" << host << ":" << port << " (revision " << session.revision() << ")"
                      << std::endl;
            server.run(host, port);
            g_server = nullptr;
        } else if (*dm) {
            for (const DemoScene& d : all_demos())
                std::cout << write_demo(d, out_dir, demo_level, demo_resolution).string() << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
