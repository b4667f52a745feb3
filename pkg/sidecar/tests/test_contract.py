"""The stub service must serve every recorded fixture verbatim."""


class TestRecordedFixtures:
    def test_every_fixture_served_verbatim(self, client, fixtures):
        assert fixtures, "fixture file must not be empty"
        for fx in fixtures:
            resp = client.post(fx["endpoint"], json=fx["request"])
            assert resp.status_code == 200, fx["endpoint"]
            assert resp.json() == fx["response"]

    def test_embed_fixture_vectors_are_unit_length(self, fixtures):
        for fx in fixtures:
            if fx["endpoint"] != "/embed":
                continue
            for vec in fx["response"]["vectors"]:
                norm = sum(x * x for x in vec) ** 0.5
                assert abs(norm - 1.0) < 1e-5
                assert len(vec) == fx["response"]["dim"]

    def test_normalized_entail_fixtures_sum_to_one(self, fixtures):
        for fx in fixtures:
            if fx["endpoint"] == "/entail" and fx["request"]["normalize"]:
                assert abs(sum(fx["response"]["probs"]) - 1.0) < 1e-6

    def test_normalize_flag_distinguishes_requests(self, client, fixtures):
        # Same premise/hypotheses recorded in both modes must not collide.
        normalized = [
            fx
            for fx in fixtures
            if fx["endpoint"] == "/entail" and fx["request"]["premise"] == "gol, jogo, campeonato"
        ]
        assert len(normalized) == 2
        responses = {
            fx["request"]["normalize"]: client.post("/entail", json=fx["request"]).json()
            for fx in normalized
        }
        assert responses[True]["probs"] != responses[False]["probs"]
