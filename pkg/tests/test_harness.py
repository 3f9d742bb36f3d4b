import json
import math

import numpy as np
import pytest

from qcmi.bounds import bound_report
from qcmi.entropy import cmi
from qcmi.errors import ConfigError, InequalityViolationError, SingularMatrixError
from qcmi.harness import (
    CSV_COLUMNS,
    ScanConfig,
    _abort,
    _json_value,
    channel_gap_scan,
    commutator_slack,
    corpus_state,
    evaluate_sample,
    half_recovery_slack,
    rotated_slacks,
    run_conjecture,
    scan,
)
from qcmi.sampling import (
    near_markov_state,
    random_classical_state,
    random_markov_state,
    substream,
)
from qcmi.stateio import read_state
from qcmi.states import ClassicalJoint, classical_state

LN2 = math.log(2)


def parity_state():
    p = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            p[a, b, (a + b) % 2] = 0.25
    return classical_state(ClassicalJoint(p))


class TestScanConfig:
    def test_rejects_unknown_corpus(self):
        with pytest.raises(ConfigError):
            ScanConfig(dims=(2, 2, 2), samples=1, corpus="gibberish")

    def test_rejects_nonpositive_samples(self):
        with pytest.raises(ConfigError):
            ScanConfig(dims=(2, 2, 2), samples=0)

    def test_rejects_bad_dims(self):
        with pytest.raises(ConfigError):
            ScanConfig(dims=(2, 2), samples=1)
        with pytest.raises(ConfigError):
            ScanConfig(dims=(2, 0, 2), samples=1)

    def test_rejects_unknown_format(self):
        with pytest.raises(ConfigError):
            ScanConfig(dims=(2, 2, 2), samples=1, fmt="xml")

    def test_rejects_nonpositive_tol(self):
        with pytest.raises(ConfigError):
            ScanConfig(dims=(2, 2, 2), samples=1, tol=0.0)

    def test_as_dict_uses_format_key(self):
        cfg = ScanConfig(dims=(2, 3, 2), samples=4, seed=7, fmt="json")
        d = cfg.as_dict()
        assert d["format"] == "json"
        assert d["dims"] == [2, 3, 2]


class TestCorpusState:
    def test_deterministic_per_index(self):
        cfg = ScanConfig(dims=(2, 2, 2), samples=3, seed=11)
        a = corpus_state(cfg, 2)
        b = corpus_state(cfg, 2)
        assert np.array_equal(a.mat, b.mat)

    def test_indices_differ(self):
        cfg = ScanConfig(dims=(2, 2, 2), samples=3, seed=11)
        assert not np.allclose(corpus_state(cfg, 0).mat, corpus_state(cfg, 1).mat)

    def test_near_markov_cycles_mix_weights(self):
        cfg = ScanConfig(dims=(2, 2, 2), samples=5, seed=12, corpus="near-markov")
        # index 0 and index 4 both land on the strongest mixing weight
        for index in (0, 4):
            expected = near_markov_state((2, 2, 2), substream(12, index), 1e-1)
            np.testing.assert_array_equal(corpus_state(cfg, index).mat, expected.mat)
        weaker = near_markov_state((2, 2, 2), substream(12, 3), 1e-4)
        np.testing.assert_array_equal(corpus_state(cfg, 3).mat, weaker.mat)


class TestEvaluateSample:
    def test_matches_direct_bound_report(self):
        cfg = ScanConfig(dims=(2, 3, 2), samples=1, seed=13)
        st = corpus_state(cfg, 0)
        row = evaluate_sample(st, 0)
        rep = bound_report(st)
        assert row.cmi == rep.cmi
        assert row.thm1_bound == rep.thm1_bound
        assert row.sigma_star_trace == rep.sigma_star_trace
        assert (row.dA, row.dB, row.dC) == (2, 3, 2)
        assert row.label in ("D1", "D2", "D3")


class TestScan:
    def test_row_count_and_indices(self):
        cfg = ScanConfig(dims=(2, 2, 2), samples=6, seed=14)
        rows = scan(cfg)
        assert [r.sample_index for r in rows] == list(range(6))

    def test_markov_corpus_rows(self):
        cfg = ScanConfig(dims=(2, 2, 2), samples=8, seed=15, corpus="markov")
        for row in scan(cfg):
            assert abs(row.cmi) <= 1e-9
            assert row.label == "D1"

    def test_classical_corpus_satisfies_recovery_pinsker(self):
        cfg = ScanConfig(dims=(2, 2, 2), samples=8, seed=16, corpus="classical-random")
        for row in scan(cfg):
            gap = max(row.recovery_gap_M, row.recovery_gap_Mprime)
            assert row.cmi >= 0.5 * gap * gap - 1e-8

    def test_near_markov_corpus_runs(self):
        cfg = ScanConfig(dims=(2, 2, 2), samples=4, seed=30, corpus="near-markov")
        rows = scan(cfg)
        assert len(rows) == 4
        assert all(row.cmi >= -1e-9 for row in rows)

    def test_csv_header_and_shape(self, tmp_path):
        out = str(tmp_path / "scan.csv")
        cfg = ScanConfig(dims=(2, 2, 2), samples=3, seed=17, out=out)
        scan(cfg)
        with open(out) as fh:
            lines = fh.read().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(CSV_COLUMNS) == 16
        assert len(lines) == 4
        assert all(len(line.split(",")) == 16 for line in lines[1:])

    def test_csv_reruns_byte_identical(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        for out in (out1, out2):
            scan(ScanConfig(dims=(2, 3, 2), samples=4, seed=18, out=str(out)))
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_report_parses(self, tmp_path):
        out = str(tmp_path / "scan.json")
        cfg = ScanConfig(dims=(2, 2, 2), samples=3, seed=19, out=out, fmt="json")
        rows = scan(cfg)
        with open(out) as fh:
            doc = json.load(fh)
        assert doc["config"]["corpus"] == "hs-random"
        assert doc["config"]["format"] == "json"
        assert len(doc["rows"]) == 3
        first = doc["rows"][0]
        assert first["cmi"] == rows[0].cmi
        assert first["support_restricted"] is False
        assert first["label"] in ("D1", "D2", "D3")


class TestViolationHandling:
    def test_abort_writes_state_artifact(self, tmp_path):
        out = str(tmp_path / "run")
        cfg = ScanConfig(dims=(2, 2, 2), samples=1, seed=20, out=out)
        st = corpus_state(cfg, 0)
        with pytest.raises(InequalityViolationError) as err:
            _abort(st, cfg, "ssa-cmi-nonnegative", 0, -1e-3)
        path = err.value.artifact_path
        assert path == out + ".violation-state.json"
        recovered = read_state(path)
        np.testing.assert_allclose(recovered.mat, st.mat, atol=1e-12)

    def test_artifact_path_defaults_without_out(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        cfg = ScanConfig(dims=(2, 2, 2), samples=1, seed=20)
        st = corpus_state(cfg, 0)
        with pytest.raises(InequalityViolationError) as err:
            _abort(st, cfg, "ssa-cmi-nonnegative", 0, -1.0)
        assert err.value.artifact_path == "qcmi-run.violation-state.json"


class TestConjectureSlacks:
    def test_half_recovery_parity_value(self):
        assert half_recovery_slack(parity_state()) == pytest.approx(LN2 - 0.5, abs=1e-9)

    def test_half_recovery_markov_near_zero(self):
        st = random_markov_state((2, 2, 3), substream(21, 0))
        assert abs(half_recovery_slack(st)) <= 1e-7

    def test_commutator_slack_equals_cmi_on_classical_states(self):
        # diagonal M commutes with its adjoint, so the penalty term vanishes
        for i in range(5):
            st = random_classical_state((2, 2, 2), substream(22, i))
            assert commutator_slack(st) == pytest.approx(cmi(st).cmi, abs=1e-10)

    def test_rotated_identity_triple_matches_corollary(self):
        st = corpus_state(ScanConfig(dims=(2, 2, 2), samples=1, seed=23), 0)
        identity_slack, best = rotated_slacks(st, substream(23, 0, 1), 4)
        rep = bound_report(st)
        assert identity_slack == pytest.approx(rep.slack_corollary, abs=1e-10)
        assert best <= identity_slack + 1e-12

    def test_rotated_zero_unitary_samples_returns_identity_slack(self):
        st = corpus_state(ScanConfig(dims=(2, 2, 2), samples=1, seed=24), 0)
        a, b = rotated_slacks(st, substream(24, 0, 1), 0)
        assert a == b

    def test_rotated_needs_full_rank(self):
        with pytest.raises(SingularMatrixError):
            rotated_slacks(parity_state(), substream(23, 1), 1)


class TestRunConjecture:
    def test_unknown_conjecture_rejected(self):
        cfg = ScanConfig(dims=(2, 2, 2), samples=1)
        with pytest.raises(ConfigError):
            run_conjecture(cfg, "perpetual-motion")

    def test_half_recovery_holds_on_classical_corpus(self, tmp_path):
        out = str(tmp_path / "conj")
        cfg = ScanConfig(
            dims=(2, 2, 2), samples=20, seed=25, corpus="classical-random", out=out
        )
        (res,) = run_conjecture(cfg, "half-recovery")
        assert res.conjecture_id == "half-recovery"
        assert res.samples == 20
        assert res.violations == 0
        assert res.min_slack >= -1e-8
        with open(out) as fh:
            doc = json.load(fh)
        assert doc["which"] == "half-recovery"
        assert doc["results"][0]["violations"] == 0

    def test_argmin_state_artifact_round_trips(self, tmp_path):
        out = str(tmp_path / "conj")
        cfg = ScanConfig(dims=(2, 2, 2), samples=5, seed=26, corpus="markov", out=out)
        (res,) = run_conjecture(cfg, "half-recovery")
        assert res.argmin_path == out + ".argmin-half-recovery.json"
        st = read_state(res.argmin_path)
        assert st.dims == (2, 2, 2)

    def test_rotated_records_slacks_without_raising(self, tmp_path):
        # negative slacks on the open corpus are data, not an error
        out = str(tmp_path / "rot")
        cfg = ScanConfig(dims=(2, 2, 2), samples=5, seed=27, out=out)
        (res,) = run_conjecture(cfg, "rotated-quarter", unitary_samples=5)
        expected_min = math.inf
        expected_violations = 0
        for i in range(5):
            st = corpus_state(cfg, i)
            _, slack = rotated_slacks(st, substream(27, i, 1), 5)
            expected_min = min(expected_min, slack)
            if slack < -cfg.tol:
                expected_violations += 1
        assert res.min_slack == expected_min
        assert res.violations == expected_violations

    def test_channel_conjectures_report_two_results(self, tmp_path):
        out = str(tmp_path / "chan")
        cfg = ScanConfig(dims=(2, 1, 2), samples=6, seed=28, out=out)
        results = run_conjecture(cfg, "channel")
        assert [r.conjecture_id for r in results] == [
            "channel-traceexp",
            "channel-petz-pinsker",
        ]
        for r in results:
            assert r.samples == 6
            assert r.violations == 0
        with open(out) as fh:
            doc = json.load(fh)
        assert doc["which"] == "channel"
        assert len(doc["results"]) == 2
        for r in results:
            if r.argmin_path is not None:
                with open(r.argmin_path) as fh:
                    chan = json.load(fh)
                assert set(chan) == {"dim", "rho", "sigma", "kraus"}
                assert chan["dim"] == 4


class TestChannelGapScan:
    def test_summary_fields(self):
        s = channel_gap_scan(dim=3, kraus=2, samples=10, seed=29)
        assert (s.samples, s.dim, s.kraus) == (10, 3, 2)
        assert s.violations == 0
        assert s.min_lhs >= -1e-8
        assert s.min_gap_slack >= -1e-8

    def test_rejects_bad_arguments(self):
        with pytest.raises(ConfigError):
            channel_gap_scan(dim=0, kraus=1, samples=1)
        with pytest.raises(ConfigError):
            channel_gap_scan(dim=2, kraus=0, samples=1)
        with pytest.raises(ConfigError):
            channel_gap_scan(dim=2, kraus=1, samples=0)


class TestJsonEncoding:
    def test_scalar_forms(self):
        assert _json_value(math.inf) == '"inf"'
        assert _json_value(-math.inf) == '"-inf"'
        assert _json_value(None) == "null"
        assert _json_value(True) == "true"
        assert _json_value(0.5) == "0.5"
        assert _json_value('a"b') == '"a\\"b"'
