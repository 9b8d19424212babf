import hashlib
import json

import numpy as np
import pytest

from negmono import (
    CampaignConfig,
    MeasureKind,
    RelationId,
    RoofConfig,
    analyze,
    builtin_state,
    emit_report,
    run_campaign,
    sample_state,
    sweep,
    write_state_json,
)
from negmono.cli import main as cli_main
from negmono.harness import (
    REPORT_CSV_HEADER,
    campaign_config_from_dict,
    campaign_report_json,
    relation_report_dict,
    relation_reports_from_csv,
    relation_reports_to_csv,
    report_sha256,
)

LIGHT_ROOF = RoofConfig(restarts=6, seed=0)


class TestBuiltinStates:
    def test_bell(self):
        psi = builtin_state("bell")
        assert np.allclose(psi.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))

    def test_ghz3(self):
        psi = builtin_state("ghz3")
        expect = np.zeros(8)
        expect[0] = expect[7] = 1 / np.sqrt(2)
        assert np.allclose(psi.amplitudes, expect)

    def test_ghz_paren_form(self):
        assert np.array_equal(builtin_state("ghz(4)").amplitudes, builtin_state("ghz4").amplitudes)

    def test_w3(self):
        psi = builtin_state("w3")
        expect = np.zeros(8)
        expect[[1, 2, 4]] = 1 / np.sqrt(3)
        assert np.allclose(psi.amplitudes, expect)

    def test_product(self):
        psi = builtin_state("product:2,3")
        assert psi.dims == (2, 3)
        assert psi.amplitudes[0] == 1

    def test_unknown_rejected(self):
        with pytest.raises(ValueError):
            builtin_state("nope")


class TestAnalyze:
    def test_antisymmetric_example(self):
        result = analyze(builtin_state("aharonov"), LIGHT_ROOF)
        assert abs(result.scren.lhs - 4.0) < 1e-9
        assert np.allclose(result.scren.values, [1.0, 1.0], atol=1e-3)
        assert np.allclose(result.screnoa.values, [1.0, 1.0], atol=1e-3)

    def test_ghz3(self):
        result = analyze(builtin_state("ghz3"))
        assert abs(result.scren.lhs - 1.0) < 1e-12
        assert np.allclose(result.scren.values, [0.0, 0.0], atol=1e-9)
        assert np.allclose(result.screnoa.values, [1.0, 1.0], atol=1e-9)

    def test_product_all_zero(self):
        result = analyze(builtin_state("product:2,2,2"))
        assert result.scren.lhs < 1e-12
        assert max(result.scren.values) < 1e-9

    def test_sorting(self):
        psi = sample_state(CampaignConfig(dims=(2, 2, 2, 2), samples=1, seed=5), 0)
        plain = analyze(psi)
        ordered = analyze(psi, sort_values=True)
        assert sorted(plain.scren.values, reverse=True) == list(ordered.scren.values)
        assert sorted(plain.screnoa.values, reverse=True) == list(ordered.screnoa.values)

    def test_tails_present_and_consistent(self):
        psi = sample_state(CampaignConfig(dims=(2, 2, 2, 2), samples=1, seed=6), 0)
        result = analyze(psi, LIGHT_ROOF, sort_values=True, include_tails=True)
        tails = result.screnoa.tail_values
        assert tails is not None and len(tails) == 2
        # the last tail is the final single-subsystem value itself
        assert abs(tails[-1] - result.screnoa.values[-1]) < 1e-12
        # collective assisted measure dominates the plain last value
        assert tails[0] >= result.screnoa.values[-1] - 1e-9

    def test_rejects_single_factor(self):
        from negmono import ket

        with pytest.raises(ValueError):
            analyze(ket([1, 0], (2,)))


class TestSweep:
    def test_antisymmetric_tightness_deltas(self):
        reports = sweep(
            builtin_state("aharonov"),
            RelationId.MONO_HAMMING,
            (1.0, 1.5, 2.0, 3.0),
            1.0,
            roof_config=LIGHT_ROOF,
        )
        deltas = [r.tightness_delta for r in reports]
        expect = [2.0**a - (1.0 + a) for a in (1.0, 1.5, 2.0, 3.0)]
        assert np.allclose(deltas, expect, atol=5e-3)
        assert all(r.satisfied for r in reports)

    def test_alpha_one_delta_zero(self):
        psi = sample_state(CampaignConfig(dims=(2, 2, 2), samples=1, seed=9), 0)
        rep = sweep(psi, RelationId.MONO_HAMMING, (1.0,), "auto", sort_values=True)[0]
        if rep.tightness_delta is not None:
            assert abs(rep.tightness_delta) < 1e-12

    def test_out_of_range_grid_rejected(self):
        with pytest.raises(ValueError):
            sweep(builtin_state("ghz3"), RelationId.MONO_HAMMING, (0.5,), "auto")


class TestCampaign:
    def small_config(self, **over):
        base = dict(
            dims=(2, 2, 2),
            samples=40,
            seed=1234,
            alphas=(1.0, 2.0, 0.5),
            relations=(
                RelationId.MONO_HAMMING,
                RelationId.MONO_HAMMING_BASE,
                RelationId.POLY_HAMMING,
            ),
            k_policy="auto",
            sort_values=True,
            roof=LIGHT_ROOF,
            shards=1,
        )
        base.update(over)
        return CampaignConfig(**base)

    def test_zero_violations_small(self):
        report = run_campaign(self.small_config())
        assert report.total_violations == 0
        assert report.baseline.ckw_violations == 0
        assert report.baseline.polygamy_violations == 0
        evaluated = {(s.relation, s.alpha): s.evaluated for s in report.stats}
        # alpha grid is filtered to each relation's range
        assert (RelationId.MONO_HAMMING, 0.5) not in evaluated
        assert (RelationId.POLY_HAMMING, 2.0) not in evaluated
        assert evaluated[(RelationId.MONO_HAMMING, 2.0)] > 0

    def test_mean_tightness_nonnegative(self):
        report = run_campaign(self.small_config())
        for s in report.stats:
            if s.relation is RelationId.MONO_HAMMING and s.mean_tightness_delta is not None:
                assert s.mean_tightness_delta >= -1e-12

    def test_deterministic_bytes(self):
        a = run_campaign(self.small_config())
        b = run_campaign(self.small_config())
        assert report_sha256(a) == report_sha256(b)

    def test_shards_equal_unsharded(self):
        from negmono.harness import campaign_report_dict

        a = campaign_report_dict(run_campaign(self.small_config(shards=1)))
        b = campaign_report_dict(run_campaign(self.small_config(shards=3)))
        # results identical; only the config echo records the shard count
        for key in ("relations", "violations", "baseline"):
            assert a[key] == b[key]

    def test_sample_state_shard_independent(self):
        cfg = self.small_config()
        psi_again = sample_state(cfg, 17)
        assert np.array_equal(sample_state(cfg, 17).amplitudes, psi_again.amplitudes)

    def test_config_json_round_trip(self):
        cfg = self.small_config()
        from negmono.harness import campaign_config_dict

        rebuilt = campaign_config_from_dict(campaign_config_dict(cfg))
        assert rebuilt == cfg


class TestEmission:
    def make_reports(self):
        return sweep(
            builtin_state("ghz3"), RelationId.POLY_HAMMING, (0.25, 0.5, 1.0), "auto"
        )

    def test_csv_header_contract(self):
        text = relation_reports_to_csv(self.make_reports())
        assert text.splitlines()[0] == (
            "relation,alpha,k,condition,lhs_pow,rhs,kim_rhs,gap,tightness_delta"
        )
        assert REPORT_CSV_HEADER == text.splitlines()[0]

    def test_json_keys(self):
        d = relation_report_dict(self.make_reports()[0])
        for key in ("id", "alpha", "k", "lhs_pow", "rhs", "satisfied", "gap"):
            assert key in d

    def test_csv_round_trip_lossless(self):
        reports = self.make_reports()
        back = relation_reports_from_csv(relation_reports_to_csv(reports))
        assert len(back) == len(reports)
        for orig, parsed in zip(reports, back):
            assert parsed.relation == orig.relation
            assert parsed.alpha == orig.alpha
            assert parsed.k == orig.k
            assert parsed.condition_holds == orig.condition_holds
            assert parsed.lhs_pow == orig.lhs_pow
            assert parsed.rhs == orig.rhs
            assert parsed.kim_rhs == orig.kim_rhs
            assert parsed.gap == orig.gap
            assert parsed.tightness_delta == orig.tightness_delta
            assert parsed.satisfied == orig.satisfied

    def test_emit_files_byte_identical(self, tmp_path):
        cfg = CampaignConfig(
            dims=(2, 2, 2), samples=20, seed=7,
            alphas=(1.0, 2.0), relations=(RelationId.MONO_HAMMING,),
            roof=LIGHT_ROOF,
        )
        report = run_campaign(cfg)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        emit_report(report, "json", p1)
        emit_report(run_campaign(cfg), "json", p2)
        h1 = hashlib.sha256(p1.read_bytes()).hexdigest()
        h2 = hashlib.sha256(p2.read_bytes()).hexdigest()
        assert h1 == h2
        emit_report(report, "csv", tmp_path / "a.csv")
        assert (tmp_path / "a.csv").read_text().startswith("relation,alpha,evaluated")

    def test_float_serialization_17_digits(self):
        rep = self.make_reports()[0]
        text = relation_reports_to_csv([rep])
        cell = text.splitlines()[1].split(",")[5]
        assert float(cell) == rep.rhs


class TestCli:
    def test_measure_builtin(self, capsys):
        code = cli_main(["measure", "ghz3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "scren" in out and "screnoa" in out

    def test_measure_state_file(self, tmp_path, capsys):
        path = tmp_path / "bell.json"
        write_state_json(builtin_state("bell"), path)
        assert cli_main(["measure", str(path)]) == 0

    def test_sweep_csv_stdout(self, capsys):
        code = cli_main([
            "sweep", "aharonov", "--relation", "mono-hamming",
            "--alphas", "1,2", "--k", "1", "--restarts", "4",
        ])
        out = capsys.readouterr().out
        assert code == 0
        assert out.startswith("relation,alpha,k,")
        assert "mono-hamming" in out

    def test_campaign_exit_zero_and_file(self, tmp_path, capsys):
        out_path = tmp_path / "report.json"
        code = cli_main([
            "campaign", "--dims", "2,2,2", "--samples", "25", "--seed", "3",
            "--alphas", "1,2", "--relations", "mono-hamming,mono-hamming-base",
            "--sort-values", "--out", str(out_path),
        ])
        assert code == 0
        data = out_path.read_text()
        assert '"violations":[]' in data.replace(" ", "")

    def test_campaign_config_file(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({
            "dims": [2, 2, 2], "samples": 10, "seed": 11,
            "alphas": [1.0], "relations": ["mono-hamming"],
            "sort_values": True,
        }))
        assert cli_main(["campaign", "--config", str(cfg_path)]) == 0

    def test_usage_error_exit_one(self):
        assert cli_main(["sweep", "ghz3", "--relation", "bogus", "--alphas", "1"]) == 1
        assert cli_main(["measure", "not-a-state"]) == 1

    def test_oracle_check_small(self, capsys):
        code = cli_main(["oracle-check", "--samples", "2", "--seed", "1", "--restarts", "8"])
        out = capsys.readouterr().out
        assert code == 0
        assert "PASS" in out
