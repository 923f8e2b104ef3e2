#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "travnet/checkpoint.hpp"
#include "travnet/dataset.hpp"
#include "travnet/eval.hpp"
#include "travnet/image_io.hpp"
#include "travnet/losses.hpp"
#include "travnet/nav.hpp"
#include "travnet/synthworld.hpp"
#include "travnet/train.hpp"

namespace py = pybind11;
using namespace travnet;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Frames cross the boundary as H x W x 3 float arrays in [0, 1].
ImageFrame frame_from_array(const FloatArray& a) {
    if (a.ndim() != 3 || a.shape(2) != 3) {
        throw ConfigError("expected an H x W x 3 array");
    }
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    ImageFrame f(3, h, w);
    auto v = a.unchecked<3>();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                f.at(c, y, x) = v(y, x, c);
            }
        }
    }
    return f;
}

FloatArray frame_to_array(const ImageFrame& f) {
    FloatArray a({f.height, f.width, 3});
    auto v = a.mutable_unchecked<3>();
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                v(y, x, c) = f.at(c, y, x);
            }
        }
    }
    return a;
}

ScoreMatrix matrix_from(const DoubleArray& a) {
    if (a.ndim() != 2) {
        throw ConfigError("expected a batch x k array");
    }
    ScoreMatrix m(a.shape(0), a.shape(1));
    std::copy(a.data(), a.data() + a.size(), m.data());
    return m;
}

std::vector<double> to_vector(const DoubleArray& a) { return {a.data(), a.data() + a.size()}; }

// Loaded checkpoint with its model, for repeated inference from Python.
class Predictor {
public:
    explicit Predictor(const std::filesystem::path& path) : model_(instantiate(load_checkpoint(path))) {}

    std::vector<std::vector<double>> predict(const std::vector<FloatArray>& images) {
        std::vector<ImageFrame> frames;
        for (const auto& a : images) {
            frames.push_back(frame_from_array(a));
        }
        std::vector<std::vector<double>> out;
        for (const auto& v : travnet::predict(*model_, frames)) {
            out.push_back(v.values());
        }
        return out;
    }

    int sections() const { return model_->sections(); }

private:
    std::unique_ptr<TraversabilityNet<float>> model_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Traversability estimation core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_IOError);

    m.def("split_sections", [](int width, int k) { return split_sections(width, k).boundaries; }, py::arg("width"),
          py::arg("k"), "Column boundaries (k + 1 entries) of k near-equal vertical bands.");
    m.def("clamp_scores", [](const DoubleArray& raw) { return clamp_scores(to_vector(raw)).values(); },
          py::arg("raw"));

    m.def("angular_difference", &angular_difference, py::arg("theta_i"), py::arg("theta_j"),
          py::arg("theta_th") = 40.0);
    m.def(
        "linear_displacement",
        [](double xi, double yi, double xj, double yj, double dist_th) {
            return linear_displacement(PoseStamped{xi, yi, 0, 0, 0}, PoseStamped{xj, yj, 0, 0, 0}, dist_th);
        },
        py::arg("xi"), py::arg("yi"), py::arg("xj"), py::arg("yj"), py::arg("dist_th") = 0.8);
    m.def(
        "select_frames",
        [](const std::vector<std::tuple<double, double, double>>& poses, double theta_th, double dist_th,
           double comb) {
            std::vector<FrameRecord> recs;
            for (std::size_t i = 0; i < poses.size(); ++i) {
                FrameRecord r;
                r.image_path = std::to_string(i);
                r.pose = {std::get<0>(poses[i]), std::get<1>(poses[i]), normalize_yaw(std::get<2>(poses[i])),
                          static_cast<std::int64_t>(i), 0.0};
                recs.push_back(r);
            }
            std::vector<std::size_t> kept;
            for (const auto& r : select_frames(recs, SelectionConfig{theta_th, dist_th, comb})) {
                kept.push_back(static_cast<std::size_t>(r.pose.frame_index));
            }
            return kept;
        },
        py::arg("poses"), py::arg("theta_th") = 40.0, py::arg("dist_th") = 0.8, py::arg("comb") = 1.0,
        "Indices of the (x, y, yaw) poses kept by near-duplicate removal.");

    m.def(
        "mse_loss", [](const DoubleArray& t, const DoubleArray& p) { return mse_loss(matrix_from(t), matrix_from(p)); },
        py::arg("target"), py::arg("prediction"));
    m.def(
        "safety_loss",
        [](const DoubleArray& t, const DoubleArray& p, double alpha) {
            LossConfig cfg;
            cfg.alpha = alpha;
            cfg.lambda = 0.0;
            return safety_loss(matrix_from(t), matrix_from(p), cfg);
        },
        py::arg("target"), py::arg("prediction"), py::arg("alpha") = 1.5,
        "Safety-preserving loss without the weight regularizer.");
    m.def(
        "domain_bce_loss",
        [](const DoubleArray& p, const DoubleArray& l) { return domain_bce_loss(to_vector(p), to_vector(l)); },
        py::arg("probabilities"), py::arg("labels"));

    m.def(
        "synth_scene",
        [](int height, int width, const std::vector<std::array<int, 4>>& boxes, const std::string& style,
           std::uint64_t seed, double noise, int k) {
            SceneSpec spec;
            spec.height = height;
            spec.width = width;
            spec.ground = ground_style_from_string(style);
            spec.seed = seed;
            spec.noise_level = noise;
            for (const auto& b : boxes) {
                spec.obstacles.push_back(Obstacle{b[0], b[1], b[2], b[3]});
            }
            return py::make_tuple(frame_to_array(render(spec)), ground_truth(spec, k).values());
        },
        py::arg("height"), py::arg("width"), py::arg("boxes") = std::vector<std::array<int, 4>>{},
        py::arg("style") = "asphalt_like", py::arg("seed") = 0, py::arg("noise") = 0.0, py::arg("k") = 9,
        "Renders a scene of (x0, y0, x1, y1) boxes; returns (image, ground-truth scores).");

    m.def("load_image", [](const std::filesystem::path& p) { return frame_to_array(load_image(p)); });
    m.def("save_image", [](const std::filesystem::path& p, const FloatArray& a) { save_image(p, frame_from_array(a)); });

    m.def(
        "linear_velocity",
        [](double center, double v_max) {
            NavConfig cfg;
            cfg.v_max = v_max;
            return linear_velocity(center, cfg);
        },
        py::arg("center_score"), py::arg("v_max") = 1.0);
    m.def(
        "steering_target",
        [](const DoubleArray& scores, double fov) {
            NavConfig cfg;
            cfg.fov = fov;
            return steering_target(TraversabilityVector(to_vector(scores)), cfg);
        },
        py::arg("scores"), py::arg("fov") = 85.0);

    m.def(
        "compute_report",
        [](const std::vector<std::vector<double>>& pred, const std::vector<std::vector<double>>& truth,
           const std::vector<std::string>& domains) {
            std::vector<TraversabilityVector> p, t;
            for (const auto& v : pred) {
                p.push_back(clamp_scores(v));
            }
            for (const auto& v : truth) {
                t.emplace_back(v);
            }
            return serialize_report(compute_report(p, t, domains));
        },
        py::arg("predictions"), py::arg("ground_truth"), py::arg("domains"), "Report as a JSON string.");

    py::class_<Predictor>(m, "Predictor")
        .def(py::init<const std::filesystem::path&>(), py::arg("checkpoint"))
        .def_property_readonly("sections", &Predictor::sections)
        .def("predict", &Predictor::predict, py::arg("images"), "Clamped scores for H x W x 3 float images.");
}
