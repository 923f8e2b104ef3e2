import os
import subprocess

import numpy as np
import pytest

import travnet


def test_split_sections():
    assert travnet.split_sections(227, 9)[0] == 0
    assert travnet.split_sections(227, 9)[-1] == 227
    assert len(travnet.split_sections(227, 9)) == 10


def test_clamp_scores():
    assert travnet.clamp_scores(np.array([-0.2, 0.5, 1.3])) == [0.0, 0.5, 1.0]


def test_select_frames_drops_near_duplicates():
    poses = [(0.0, 0.0, 0.0), (0.1, 0.0, 0.0), (2.0, 0.0, 0.0), (2.0, 0.0, 90.0)]
    assert travnet.select_frames(poses) == [0, 2, 3]


def test_losses():
    t = np.array([[0.5, 0.5]])
    p = np.array([[0.7, 0.3]])
    # squared errors summed over sections, averaged over the batch
    assert travnet.mse_loss(t, p) == pytest.approx(0.08)
    assert travnet.safety_loss(t, p, alpha=0.0) == travnet.mse_loss(t, p)
    assert travnet.safety_loss(t, p, alpha=1.5) == pytest.approx(0.08 + 1.5 * 0.04)
    assert travnet.domain_bce_loss(np.array([0.5]), np.array([1.0])) == pytest.approx(np.log(2.0))


def test_synth_scene_and_image_round_trip(tmp_path):
    image, scores = travnet.synth_scene(100, 90, boxes=[(0, 10, 10, 40)], k=9)
    assert image.shape == (100, 90, 3)
    assert scores[0] == pytest.approx(0.6)
    assert all(s == 1.0 for s in scores[1:])
    path = tmp_path / "scene.png"
    travnet.save_image(path, image)
    back = travnet.load_image(path)
    assert back.shape == image.shape
    assert np.max(np.abs(back - image)) <= 0.5 / 255 + 1e-6


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(ValueError):
        travnet.split_sections(5, 9)
    with pytest.raises(IOError):
        travnet.load_image(tmp_path / "missing.png")


def test_navigation_helpers():
    assert travnet.linear_velocity(0.3, v_max=1.0) == pytest.approx(0.5)
    assert travnet.linear_velocity(0.1) == 0.0
    scores = np.zeros(9)
    scores[4] = 1.0
    assert travnet.steering_target(scores) == pytest.approx(0.0)


def test_compute_report():
    report = travnet.compute_report([[0.5, 0.5]], [[0.25, 0.5]], ["asphalt_like"])
    assert report["mae_all"] == pytest.approx(0.125)
    assert report["unsafe_rate"] == pytest.approx(0.5)


@pytest.mark.skipif(not os.environ.get("TRAVNET_CLI"), reason="TRAVNET_CLI not set")
def test_predictor_on_cli_checkpoint(tmp_path):
    cli = os.environ["TRAVNET_CLI"]
    data = tmp_path / "data"
    run = tmp_path / "run"
    subprocess.run([cli, "synth-gen", "--n", "4", "--height", "32", "--width", "56", "--out-dir", str(data)],
                   check=True)
    subprocess.run([cli, "train", "--manifest", str(data / "manifest.jsonl"), "--annotations",
                    str(data / "annotations"), "--out-dir", str(run), "--epochs", "1", "--batch", "2",
                    "--input-short-side", "32"], check=True)
    model = travnet.Predictor(run / "checkpoint.trv")
    assert model.sections == 9
    image = travnet.load_image(data / "images" / "scene_00000.png")
    (scores,) = model.predict([image])
    assert len(scores) == 9
    assert all(0.0 <= s <= 1.0 for s in scores)
