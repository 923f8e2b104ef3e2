#include "travnet/annotation_server.hpp"

#include <sys/socket.h>

#include <fstream>
#include <mutex>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "travnet/dataset.hpp"

namespace travnet {

namespace {

std::string content_type_for(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    for (auto& c : ext) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (ext == ".png") {
        return "image/png";
    }
    if (ext == ".jpg" || ext == ".jpeg") {
        return "image/jpeg";
    }
    if (ext == ".bmp") {
        return "image/bmp";
    }
    return "application/octet-stream";
}

const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>travnet annotator</title></head>
<body>
<p>No UI assets configured. Start the server with --static-dir to serve the annotator.</p>
<p>Data API: <code>GET /api/frames</code>, <code>GET /api/frames/{index}/image</code>,
<code>GET|PUT /api/frames/{index}/annotation</code>.</p>
</body></html>
)";

void send_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(nlohmann::json{{"error", message}}.dump() + "\n", "application/json");
}

}  // namespace

struct AnnotationServer::Impl {
    AnnotationServerConfig cfg;
    std::filesystem::path root;  // manifest directory
    std::vector<FrameRecord> frames;
    httplib::Server server;
    std::mutex bind_mutex;
    bool bound = false;

    explicit Impl(AnnotationServerConfig c) : cfg(std::move(c)) {
        if (cfg.k < 1) {
            throw ConfigError("k must be positive");
        }
        frames = read_manifest(cfg.manifest);
        root = cfg.manifest.parent_path();
        std::filesystem::create_directories(cfg.annotations_dir);
        if (cfg.static_dir && !std::filesystem::is_directory(*cfg.static_dir)) {
            throw ConfigError(fmt::format("static directory {} does not exist", cfg.static_dir->string()));
        }
        // Plain SO_REUSEADDR so a port held by another process is reported, not shared.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
        });
        routes();
    }

    std::filesystem::path annotation_path(const FrameRecord& r) const {
        return cfg.annotations_dir / annotation_filename(r.image_path);
    }

    const FrameRecord* frame_at(const httplib::Request& req, httplib::Response& res) const {
        std::size_t idx = 0;
        try {
            idx = std::stoul(req.matches[1].str());
        } catch (const std::exception&) {
            send_error(res, 400, "bad frame index");
            return nullptr;
        }
        if (idx >= frames.size()) {
            send_error(res, 404, fmt::format("frame {} does not exist", idx));
            return nullptr;
        }
        return &frames[idx];
    }

    void routes() {
        server.Get("/api/frames", [this](const httplib::Request& req, httplib::Response& res) {
            const bool only_open = req.has_param("unannotated") && req.get_param_value("unannotated") != "0";
            nlohmann::json list = nlohmann::json::array();
            for (std::size_t i = 0; i < frames.size(); ++i) {
                const bool done = std::filesystem::exists(annotation_path(frames[i]));
                if (only_open && done) {
                    continue;
                }
                list.push_back({{"index", i},
                                {"image_path", frames[i].image_path},
                                {"frame_index", frames[i].pose.frame_index},
                                {"domain", frames[i].domain},
                                {"annotated", done}});
            }
            res.set_content(nlohmann::json{{"k", cfg.k}, {"frames", list}}.dump() + "\n", "application/json");
        });

        server.Get(R"(/api/frames/(\d+)/image)", [this](const httplib::Request& req, httplib::Response& res) {
            const FrameRecord* r = frame_at(req, res);
            if (r == nullptr) {
                return;
            }
            const auto path = root / r->image_path;
            std::ifstream in(path, std::ios::binary);
            if (!in) {
                send_error(res, 404, fmt::format("image {} is missing", r->image_path));
                return;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            res.set_content(buf.str(), content_type_for(path));
        });

        server.Get(R"(/api/frames/(\d+)/annotation)", [this](const httplib::Request& req, httplib::Response& res) {
            const FrameRecord* r = frame_at(req, res);
            if (r == nullptr) {
                return;
            }
            std::ifstream in(annotation_path(*r), std::ios::binary);
            if (!in) {
                send_error(res, 404, "not annotated yet");
                return;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            res.set_content(buf.str(), "application/json");
        });

        server.Put(R"(/api/frames/(\d+)/annotation)", [this](const httplib::Request& req, httplib::Response& res) {
            const FrameRecord* r = frame_at(req, res);
            if (r == nullptr) {
                return;
            }
            Annotation a;
            try {
                const auto doc = nlohmann::json::parse(req.body);
                if (!doc.is_object()) {
                    throw ConfigError("annotation payload must be an object");
                }
                nlohmann::json full = doc;
                if (full.contains("image_path") && full["image_path"] != r->image_path) {
                    throw ConfigError("image_path does not match the frame");
                }
                full["image_path"] = r->image_path;
                a = full.get<Annotation>();
                a.validate();
                if (a.k != cfg.k) {
                    throw ConfigError(fmt::format("expected k = {}, got {}", cfg.k, a.k));
                }
            } catch (const nlohmann::json::exception& e) {
                send_error(res, 400, fmt::format("malformed annotation: {}", e.what()));
                return;
            } catch (const ConfigError& e) {
                send_error(res, 400, e.what());
                return;
            }
            if (a.created_at.empty()) {
                a.created_at = utc_timestamp();
            }
            const std::string bytes = serialize_annotation(a);
            try {
                write_file_atomic(annotation_path(*r), bytes);
            } catch (const DataError& e) {
                send_error(res, 500, e.what());
                return;
            }
            res.set_content(bytes, "application/json");
        });

        if (cfg.static_dir) {
            server.set_mount_point("/", cfg.static_dir->string());
        } else {
            server.Get("/", [](const httplib::Request&, httplib::Response& res) {
                res.set_content(kPlaceholderPage, "text/html");
            });
        }
    }
};

AnnotationServer::AnnotationServer(AnnotationServerConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind() {
    std::lock_guard lock(impl_->bind_mutex);
    if (impl_->bound) {
        throw ConfigError("server already bound");
    }
    int port = impl_->cfg.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(impl_->cfg.host);
        if (port < 0) {
            throw DataError(fmt::format("cannot bind {}", impl_->cfg.host));
        }
    } else if (!impl_->server.bind_to_port(impl_->cfg.host, port)) {
        throw DataError(fmt::format("cannot bind {}:{} (port in use?)", impl_->cfg.host, port));
    }
    impl_->bound = true;
    return port;
}

void AnnotationServer::serve() {
    if (!impl_->bound) {
        throw ConfigError("bind() must succeed before serve()");
    }
    impl_->server.listen_after_bind();
}

void AnnotationServer::stop() {
    if (impl_ && impl_->server.is_running()) {
        impl_->server.stop();
    }
}

bool AnnotationServer::running() const { return impl_->server.is_running(); }

}  // namespace travnet
