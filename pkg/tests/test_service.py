"""HTTP service: endpoint contracts, job lifecycle, library equivalence."""

import base64
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from latentlab import (
    build_point_cloud,
    load_model,
    load_slider,
    probe_words,
    save_pgm,
    serialize_point_cloud,
)
from latentlab.service import create_app
from tests.conftest import make_image_classes

CORPUS = (
    "red warm fire sun heat red warm fire sun heat "
    "blue cool ice moon chill blue cool ice moon chill "
) * 20

CONFIG = {"dim": 8, "epochs": 2, "min_count": 2, "seed": 6}


@pytest.fixture
def client(tmp_path):
    with TestClient(create_app(tmp_path / "data")) as c:
        yield c


def wait_for_job(client, job_id, timeout=30.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        record = client.get(f"/jobs/{job_id}").json()
        if record["status"] in ("done", "failed"):
            return record
        time.sleep(0.02)
    raise AssertionError(f"job {job_id} did not finish")


def train_words(client, text=CORPUS, config=CONFIG):
    corpus_id = client.post("/corpora", json={"text": text}).json()["corpus_id"]
    r = client.post("/models/words", json={"corpus_id": corpus_id, "config": config})
    assert r.status_code == 202
    record = wait_for_job(client, r.json()["job_id"])
    assert record["status"] == "done", record
    return record["model_id"]


def b64_classes():
    class_a, class_b = make_image_classes()
    enc = lambda imgs: [base64.b64encode(save_pgm(i)).decode() for i in imgs]
    return enc(class_a), enc(class_b)


class TestCorpora:
    def test_upload(self, client):
        r = client.post("/corpora", json={"text": "some words here"})
        assert r.status_code == 201
        assert r.json()["corpus_id"]

    def test_empty_text_rejected(self, client):
        r = client.post("/corpora", json={"text": ""})
        assert r.status_code == 400
        assert r.json() == {"error": "EmptyCorpus", "detail": r.json()["detail"]}

    def test_no_deduplication(self, client):
        ids = {client.post("/corpora", json={"text": "same"}).json()["corpus_id"]
               for _ in range(2)}
        assert len(ids) == 2


class TestWordsTraining:
    def test_lifecycle(self, client):
        model_id = train_words(client)
        listing = client.get("/models").json()
        assert [m["model_id"] for m in listing] == [model_id]
        detail = client.get(f"/models/{model_id}").json()
        assert detail["model_type"] == "words"
        assert detail["shape"]["dim"] == 8

    def test_unknown_corpus(self, client):
        r = client.post("/models/words", json={"corpus_id": "ghost", "config": {}})
        assert r.status_code == 404
        assert r.json()["error"] == "UnknownCorpus"

    def test_invalid_config_rejected_upfront(self, client):
        corpus_id = client.post("/corpora", json={"text": CORPUS}).json()["corpus_id"]
        r = client.post(
            "/models/words",
            json={"corpus_id": corpus_id, "config": {"dim": 0}},
        )
        assert r.status_code == 400
        assert r.json()["error"] == "InvalidConfig"

    def test_unknown_config_key_rejected(self, client):
        corpus_id = client.post("/corpora", json={"text": CORPUS}).json()["corpus_id"]
        r = client.post(
            "/models/words",
            json={"corpus_id": corpus_id, "config": {"dimension": 4}},
        )
        assert r.status_code == 400

    def test_job_failure_carries_domain_error(self, client):
        corpus_id = client.post(
            "/corpora", json={"text": "each word appears once only"}
        ).json()["corpus_id"]
        r = client.post(
            "/models/words",
            json={"corpus_id": corpus_id, "config": {"min_count": 5}},
        )
        record = wait_for_job(client, r.json()["job_id"])
        assert record["status"] == "failed"
        assert "EmptyVocabulary" in record["error"]

    def test_unknown_job(self, client):
        assert client.get("/jobs/ghost").status_code == 404


class TestImagesTraining:
    def test_lifecycle_creates_class_axis(self, client):
        class_a, class_b = b64_classes()
        r = client.post(
            "/models/images", json={"class_a": class_a, "class_b": class_b, "q": 4}
        )
        assert r.status_code == 202
        record = wait_for_job(client, r.json()["job_id"])
        assert record["status"] == "done", record
        model_id = record["model_id"]
        sliders = client.get(f"/models/{model_id}/sliders").json()
        assert [s["slider_id"] for s in sliders] == ["class-axis"]

    def test_bad_base64_rejected(self, client):
        r = client.post(
            "/models/images",
            json={"class_a": ["!!!not-base64!!!"], "class_b": ["aGk="], "q": 1},
        )
        assert r.status_code == 400

    def test_malformed_pgm_rejected(self, client):
        bogus = base64.b64encode(b"P2\n1 1\n255\n\x00").decode()
        class_a, _ = b64_classes()
        r = client.post(
            "/models/images", json={"class_a": [bogus], "class_b": class_a, "q": 1}
        )
        assert r.status_code == 400
        assert r.json()["error"] == "MalformedPgm"

    def test_identical_classes_fail_with_degenerate_axis(self, client):
        class_a, _ = b64_classes()
        r = client.post(
            "/models/images", json={"class_a": class_a, "class_b": class_a, "q": 2}
        )
        record = wait_for_job(client, r.json()["job_id"])
        assert record["status"] == "failed"
        assert "DegenerateAxis" in record["error"]


class TestSliders:
    def test_create_and_probe(self, client):
        model_id = train_words(client)
        r = client.post(
            f"/models/{model_id}/sliders",
            json={"pole_a": ["red", "warm"], "pole_b": ["blue", "cool"],
                  "labels": ["hot", "cold"]},
        )
        assert r.status_code == 201
        slider_id = r.json()["slider_id"]
        r = client.get(
            f"/models/{model_id}/sliders/{slider_id}/probe",
            params={"t": -1.0, "base": "sun", "k": 3},
        )
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"t", "probe_point", "associations"}
        assert len(body["associations"]) == 3

    def test_unknown_word_named_in_detail(self, client):
        model_id = train_words(client)
        r = client.post(
            f"/models/{model_id}/sliders",
            json={"pole_a": ["red"], "pole_b": ["zzzz"]},
        )
        assert r.status_code == 400
        assert r.json()["error"] == "UnknownWord"
        assert "zzzz" in r.json()["detail"]

    def test_degenerate_axis(self, client):
        model_id = train_words(client)
        r = client.post(
            f"/models/{model_id}/sliders",
            json={"pole_a": ["red"], "pole_b": ["red"]},
        )
        assert r.status_code == 400
        assert r.json()["error"] == "DegenerateAxis"

    def test_unknown_model(self, client):
        r = client.post(
            "/models/ghost/sliders", json={"pole_a": ["a"], "pole_b": ["b"]}
        )
        assert r.status_code == 404
        assert r.json()["error"] == "UnknownModel"


class TestProbeEndpoint:
    def test_nan_t_rejected(self, client):
        model_id = train_words(client)
        slider_id = client.post(
            f"/models/{model_id}/sliders",
            json={"pole_a": ["red"], "pole_b": ["blue"]},
        ).json()["slider_id"]
        r = client.get(
            f"/models/{model_id}/sliders/{slider_id}/probe",
            params={"t": "nan", "base": "sun"},
        )
        assert r.status_code == 400
        assert r.json()["error"] == "BadParameter"

    def test_words_probe_requires_base(self, client):
        model_id = train_words(client)
        slider_id = client.post(
            f"/models/{model_id}/sliders",
            json={"pole_a": ["red"], "pole_b": ["blue"]},
        ).json()["slider_id"]
        r = client.get(
            f"/models/{model_id}/sliders/{slider_id}/probe", params={"t": 0.0}
        )
        assert r.status_code == 400

    def test_unknown_slider_404(self, client):
        model_id = train_words(client)
        r = client.get(
            f"/models/{model_id}/sliders/ghost/probe",
            params={"t": 0.0, "base": "sun"},
        )
        assert r.status_code == 404
        assert r.json()["error"] == "UnknownSlider"

    def test_matches_library_probe(self, client, tmp_path):
        model_id = train_words(client)
        slider_id = client.post(
            f"/models/{model_id}/sliders",
            json={"pole_a": ["red", "warm"], "pole_b": ["blue", "cool"]},
        ).json()["slider_id"]
        body = client.get(
            f"/models/{model_id}/sliders/{slider_id}/probe",
            params={"t": 0.4, "base": "sun", "k": 5},
        ).json()

        model_dir = tmp_path / "data" / "models" / model_id
        model = load_model(model_dir)
        dim = load_slider(model_dir, slider_id)
        want = probe_words(model, dim, "sun", t=0.4, k=5).to_dict()
        assert body == want

    def test_image_probe_returns_pgm(self, client):
        class_a, class_b = b64_classes()
        r = client.post(
            "/models/images", json={"class_a": class_a, "class_b": class_b, "q": 4}
        )
        record = wait_for_job(client, r.json()["job_id"])
        model_id = record["model_id"]
        body = client.get(
            f"/models/{model_id}/sliders/class-axis/probe", params={"t": -1.0}
        ).json()
        assert set(body) == {"t", "probe_point", "image_pgm"}
        assert base64.b64decode(body["image_pgm"]).startswith(b"P5\n4 4\n255\n")


class TestPointCloud:
    def test_byte_identical_to_library(self, client, tmp_path):
        model_id = train_words(client)
        slider_id = client.post(
            f"/models/{model_id}/sliders",
            json={"pole_a": ["red"], "pole_b": ["blue"]},
        ).json()["slider_id"]
        r = client.get(
            f"/models/{model_id}/pointcloud",
            params={"max_points": 6, "slider": slider_id},
        )
        assert r.status_code == 200

        model_dir = tmp_path / "data" / "models" / model_id
        model = load_model(model_dir)
        dim = load_slider(model_dir, slider_id)
        want = serialize_point_cloud(build_point_cloud(model, dim, max_points=6))
        assert r.content == want

    def test_no_slider_gives_null_coords(self, client):
        model_id = train_words(client)
        body = client.get(f"/models/{model_id}/pointcloud").json()
        assert body["axis"] is None
        assert all(p["coord"] is None for p in body["points"])

    def test_unknown_model_404(self, client):
        assert client.get("/models/ghost/pointcloud").status_code == 404


class TestListings:
    def test_fresh_server_empty(self, client):
        assert client.get("/models").json() == []

    def test_unknown_model_detail(self, client):
        r = client.get("/models/ghost")
        assert r.status_code == 404
        assert set(r.json()) == {"error", "detail"}

    def test_models_survive_restart(self, client, tmp_path):
        model_id = train_words(client)
        with TestClient(create_app(tmp_path / "data")) as second:
            listing = second.get("/models").json()
            assert [m["model_id"] for m in listing] == [model_id]
