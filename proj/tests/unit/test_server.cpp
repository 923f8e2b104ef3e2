#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "travnet/annotation_server.hpp"
#include "travnet/dataset.hpp"
#include "travnet/image_io.hpp"
#include "travnet/synthworld.hpp"

using namespace travnet;
namespace fs = std::filesystem;

namespace {

fs::path make_dataset(const std::string& name, int n) {
    const fs::path root = fs::temp_directory_path() / ("travnet_server_" + name);
    fs::remove_all(root);
    fs::create_directories(root / "images");
    SceneDistribution d;
    d.height = 24;
    d.width = 36;
    std::vector<FrameRecord> recs;
    int i = 0;
    for (const auto& s : generate_domain_set(n, GroundStyle::asphalt_like, 1, d)) {
        FrameRecord r;
        r.image_path = "images/f" + std::to_string(i) + ".png";
        r.pose.frame_index = i++;
        save_image(root / r.image_path, s.frame);
        recs.push_back(r);
    }
    write_manifest(root / "manifest.jsonl", recs);
    return root;
}

// Server bound to an ephemeral port and served on a background thread.
struct Running {
    AnnotationServer server;
    int port = 0;
    std::thread thread;

    explicit Running(AnnotationServerConfig cfg) : server(std::move(cfg)) {
        port = server.bind();
        thread = std::thread([this] { server.serve(); });
        for (int i = 0; i < 200 && !server.running(); ++i) {
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
    }
    ~Running() {
        server.stop();
        thread.join();
    }
    httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

AnnotationServerConfig config_for(const fs::path& root) {
    AnnotationServerConfig cfg;
    cfg.manifest = root / "manifest.jsonl";
    cfg.annotations_dir = root / "annotations";
    cfg.port = 0;
    return cfg;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kValid =
    R"({"k": 9, "cutoff_y": [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 1.0], "annotator_id": "a", "created_at": "2024-05-01T10:00:00Z"})";

}  // namespace

TEST_CASE("frame list and images") {
    const auto root = make_dataset("list", 3);
    Running srv(config_for(root));
    auto cli = srv.client();
    auto res = cli.Get("/api/frames");
    REQUIRE(res);
    CHECK(res->status == 200);
    const auto j = nlohmann::json::parse(res->body);
    CHECK(j.at("k") == 9);
    REQUIRE(j.at("frames").size() == 3);
    CHECK(j["frames"][2]["image_path"] == "images/f2.png");
    CHECK(j["frames"][0]["annotated"] == false);

    auto img = cli.Get("/api/frames/1/image");
    REQUIRE(img);
    CHECK(img->status == 200);
    CHECK(img->get_header_value("Content-Type") == "image/png");
    CHECK(img->body == read_file(root / "images/f1.png"));

    CHECK(cli.Get("/api/frames/7/image")->status == 404);
    CHECK(cli.Get("/api/frames/0/annotation")->status == 404);
    CHECK(cli.Get("/")->status == 200);
}

TEST_CASE("saved annotations round trip byte for byte") {
    const auto root = make_dataset("roundtrip", 2);
    Running srv(config_for(root));
    auto cli = srv.client();
    auto put = cli.Put("/api/frames/1/annotation", kValid, "application/json");
    REQUIRE(put);
    CHECK(put->status == 200);
    auto get = cli.Get("/api/frames/1/annotation");
    REQUIRE(get);
    CHECK(get->body == put->body);
    CHECK(get->body == read_file(root / "annotations" / "f1.json"));
    const Annotation a = parse_annotation(get->body);
    CHECK(a.image_path == "images/f1.png");
    CHECK(a.cutoff_y[8] == 1.0);

    const auto open = nlohmann::json::parse(cli.Get("/api/frames?unannotated=1")->body);
    REQUIRE(open["frames"].size() == 1);
    CHECK(open["frames"][0]["index"] == 0);
}

TEST_CASE("invalid annotations are rejected without writing") {
    const auto root = make_dataset("reject", 1);
    Running srv(config_for(root));
    auto cli = srv.client();
    const std::string bad =
        R"({"k": 9, "cutoff_y": [0, 0.1, 0.2, 0.3, 1.2, 0.5, 0.6, 0.7, 1.0]})";
    auto res = cli.Put("/api/frames/0/annotation", bad, "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(nlohmann::json::parse(res->body).contains("error"));
    CHECK(cli.Put("/api/frames/0/annotation", R"({"k": 3, "cutoff_y": [0, 0, 0]})", "application/json")->status ==
          400);
    CHECK(cli.Put("/api/frames/0/annotation", "{oops", "application/json")->status == 400);
    CHECK(cli.Put("/api/frames/0/annotation",
                  R"({"image_path": "other.png", "k": 1, "cutoff_y": [0]})", "application/json")
              ->status == 400);
    CHECK(fs::is_empty(root / "annotations"));
}

TEST_CASE("concurrent saves to different frames all persist") {
    const auto root = make_dataset("concurrent", 8);
    Running srv(config_for(root));
    std::vector<std::thread> workers;
    for (int i = 0; i < 8; ++i) {
        workers.emplace_back([&, i] {
            auto cli = srv.client();
            nlohmann::json doc = nlohmann::json::parse(kValid);
            doc["cutoff_y"][0] = i / 10.0;
            for (int rep = 0; rep < 5; ++rep) {
                cli.Put("/api/frames/" + std::to_string(i) + "/annotation", doc.dump(), "application/json");
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (int i = 0; i < 8; ++i) {
        const Annotation a = read_annotation(root / "annotations" / ("f" + std::to_string(i) + ".json"));
        CHECK(a.cutoff_y[0] == doctest::Approx(i / 10.0));
    }
    int files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(root / "annotations")) {
        ++files;
    }
    CHECK(files == 8);
}

TEST_CASE("a taken port is reported") {
    const auto root = make_dataset("port", 1);
    Running first(config_for(root));
    auto cfg = config_for(root);
    cfg.port = first.port;
    AnnotationServer second(cfg);
    CHECK_THROWS_AS(second.bind(), DataError);
}

TEST_CASE("static assets are served when configured") {
    const auto root = make_dataset("static", 1);
    fs::create_directories(root / "ui");
    std::ofstream(root / "ui" / "index.html") << "<html>ui</html>";
    auto cfg = config_for(root);
    cfg.static_dir = root / "ui";
    Running srv(cfg);
    auto res = srv.client().Get("/index.html");
    REQUIRE(res);
    CHECK(res->body == "<html>ui</html>");
    cfg.static_dir = root / "missing";
    CHECK_THROWS_AS(AnnotationServer{cfg}, ConfigError);
}
