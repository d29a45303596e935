import asyncio
import threading

import pytest

from core.config import GATEWAY_MAX_CUTOFF


class TestGatewayHealth:
    @pytest.mark.asyncio
    async def test_health_endpoint(self, client):
        response = await client.get("/health")
        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "ok"
        assert "haar" in data["suites"]

    @pytest.mark.asyncio
    async def test_root_endpoint(self, client):
        response = await client.get("/")
        assert response.status_code == 200
        assert response.json()["system"] == "qsphere"

    @pytest.mark.asyncio
    async def test_security_headers_present(self, client):
        response = await client.get("/health")
        assert response.headers.get("x-content-type-options") == "nosniff"
        assert response.headers.get("x-frame-options") == "DENY"


class TestGatewayComputations:
    @pytest.mark.asyncio
    async def test_normalize_scalar(self, client):
        response = await client.post("/normalize", json={"expr": "(q^2 - 1)/(q - 1)", "context": "scalar"})
        assert response.status_code == 200
        assert response.json()["value"] == "1 + q"

    @pytest.mark.asyncio
    async def test_normalize_algebra(self, client):
        response = await client.post("/normalize", json={"expr": "b*a", "context": "algebra"})
        assert response.status_code == 200
        assert response.json()["value"] == "q^-1*a*b"

    @pytest.mark.asyncio
    async def test_haar_of_one(self, client):
        response = await client.post("/haar", json={"expr": "1"})
        assert response.status_code == 200
        data = response.json()
        assert data["value"] == "1"
        assert data["at_q0_half"] == "1.0"

    @pytest.mark.asyncio
    async def test_tau_trivial(self, client):
        response = await client.post("/tau", json={"x0": "1", "x1": "1", "x2": "B"})
        assert response.status_code == 200
        assert response.json()["value"] == "0"

    @pytest.mark.asyncio
    async def test_spectrum(self, client):
        response = await client.get("/spectrum", params={"q0": "1/2", "L": 4})
        assert response.status_code == 200
        data = response.json()
        assert data["L"] == 4
        assert data["check"]["passed"] is True
        assert [level["n"] for level in data["levels"]] == [1, 2, 3, 4]

    @pytest.mark.asyncio
    async def test_verify_scalar(self, client):
        response = await client.post("/verify", json={"suite": "scalar", "seed": 3})
        assert response.status_code == 200
        data = response.json()
        assert data["passed"] is True
        assert len(data["digest"]) == 64


class TestGatewayErrors:
    @pytest.mark.asyncio
    async def test_parse_error(self, client):
        response = await client.post("/normalize", json={"expr": "a +* b", "context": "algebra"})
        assert response.status_code == 400
        assert response.json()["code"] == "PARSE"

    @pytest.mark.asyncio
    async def test_unknown_context(self, client):
        response = await client.post("/normalize", json={"expr": "a", "context": "lie"})
        assert response.status_code == 400
        assert response.json()["code"] == "INVALID_CONTEXT"

    @pytest.mark.asyncio
    async def test_not_in_subalgebra(self, client):
        response = await client.post("/tau", json={"x0": "a", "x1": "A", "x2": "B"})
        assert response.status_code == 400
        assert response.json()["code"] == "NOT_IN_SUBALGEBRA"

    @pytest.mark.asyncio
    async def test_unknown_suite(self, client):
        response = await client.post("/verify", json={"suite": "everything"})
        assert response.status_code == 400
        assert response.json()["code"] == "UNKNOWN_SUITE"

    @pytest.mark.asyncio
    async def test_cutoff_limit(self, client):
        response = await client.get("/spectrum", params={"L": 1000})
        assert response.status_code == 400
        assert response.json()["code"] == "GATEWAY_CUTOFF"

    @pytest.mark.asyncio
    async def test_cutoff_above_gateway_limit(self, client):
        response = await client.get("/spectrum", params={"L": GATEWAY_MAX_CUTOFF + 1})
        assert response.status_code == 400
        assert response.json()["code"] == "GATEWAY_CUTOFF"

    @pytest.mark.asyncio
    async def test_spectral_suite_not_served(self, client):
        response = await client.post("/verify", json={"suite": "spectral"})
        assert response.status_code == 400
        assert response.json()["code"] == "SUITE_NOT_SERVED"


class TestComputeLane:
    @pytest.mark.asyncio
    async def test_full_lane_returns_503(self, client, monkeypatch):
        import gateway

        lane = gateway.ComputeLane(depth=1)
        monkeypatch.setattr(gateway, "compute_lane", lane)
        release = threading.Event()
        holder = asyncio.create_task(lane.run(release.wait, 10))
        await asyncio.sleep(0)
        try:
            response = await client.post("/haar", json={"expr": "1"})
        finally:
            release.set()
            await holder
        assert response.status_code == 503
        assert response.json()["code"] == "BUSY"
        assert response.headers["retry-after"] == "5"
        assert lane.stats()["rejected"] == 1
        lane.shutdown()

    @pytest.mark.asyncio
    async def test_slot_freed_after_job(self, client, monkeypatch):
        import gateway

        lane = gateway.ComputeLane(depth=1)
        monkeypatch.setattr(gateway, "compute_lane", lane)
        for _ in range(3):
            response = await client.post("/haar", json={"expr": "1"})
            assert response.status_code == 200
        assert lane.stats() == {"depth": 1, "admitted": 3, "rejected": 0}
        lane.shutdown()

    @pytest.mark.asyncio
    async def test_health_reports_lane(self, client):
        data = (await client.get("/health")).json()
        assert set(data["compute"]) == {"depth", "admitted", "rejected"}
        assert "spectral" not in data["suites"]
