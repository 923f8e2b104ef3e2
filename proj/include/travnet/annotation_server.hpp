#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace travnet {

struct AnnotationServerConfig {
    std::filesystem::path manifest;
    std::filesystem::path annotations_dir;
    std::optional<std::filesystem::path> static_dir;  // UI assets; a placeholder page otherwise
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    int k = 9;
};

/// Data API for the annotation UI.
///
///   GET /api/frames[?unannotated=1]      frame list in manifest order
///   GET /api/frames/{index}/image        raw image bytes
///   GET /api/frames/{index}/annotation   stored annotation document
///   PUT /api/frames/{index}/annotation   {k, cutoff_y, annotator_id?, created_at?}
///
/// PUT validates the payload, stores the canonical document through a temp-file
/// rename and answers with the stored bytes. Rejected payloads get a 400 with
/// {"error": message} and nothing is written.
class AnnotationServer {
public:
    explicit AnnotationServer(AnnotationServerConfig cfg);
    ~AnnotationServer();
    AnnotationServer(const AnnotationServer&) = delete;
    AnnotationServer& operator=(const AnnotationServer&) = delete;

    /// Binds the listening socket and returns the port. Throws DataError when
    /// the address is unavailable.
    int bind();
    /// Serves until stop(); bind() must have succeeded.
    void serve();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace travnet
