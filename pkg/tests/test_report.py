"""Report rendering details: DOT conventions, text output, sentencing, snapshots."""

import json
from pathlib import Path

from casecalc.document import parse_file, serialize
from casecalc.evaluation import EvaluationParams, evaluate_document
from casecalc.graph import Link, LinkKind, Node, NodeKind, claim
from casecalc.report import (
    dashboard_stats,
    report_text,
    sentencing_skeleton,
    sentencing_text,
    to_dot,
)

import factories

CORPUS = Path(__file__).parent / "fixtures" / "corpus"


class TestDot:
    def test_link_conventions(self):
        doc = factories.sound_case_document()
        g = doc.case.add_node(Node("note", NodeKind.COMMENT, narrative="cross reference"))
        g = g.add_link(Link("note", "C.top", LinkKind.EMBEDDED))
        dot = to_dot(g)
        assert '"S.concrete" -> "C.top";' in dot                              # logical solid
        assert '"C.top" -> "note" [color=gray constraint=false];' in dot      # embedded reversed
        assert '"D.open" -> "S.decomp" [style=dashed];' in dot                # attack dashed

    def test_colors_fill_nodes(self):
        doc = factories.sound_case_document()
        report = evaluate_document(doc)
        dot = to_dot(doc.case, report.colors)
        assert "fillcolor" in dot

    def test_narratives_are_escaped_and_trimmed(self):
        g = claim("C1", 'a "quoted" and very long narrative ' + "x" * 100)
        from casecalc.graph import CaseGraph
        dot = to_dot(CaseGraph.empty(g))
        assert '"quoted"' not in dot
        assert "'quoted'" in dot


class TestTextReport:
    def test_sections_present(self, sound_doc):
        report = evaluate_document(sound_doc)
        text = report_text(report)
        for heading in ("structure", "evidence weight", "confidence", "residual doubt bound",
                        "severity gate: pass", "exit code: 0"):
            assert heading in text


class TestSentencing:
    def test_sound_case_bullets(self, sound_doc):
        report = evaluate_document(sound_doc)
        skeleton = sentencing_skeleton(sound_doc, report)
        by_key = {i["key"]: i for i in skeleton["items"]}
        assert by_key["reasoning"]["status"] == "satisfied"
        assert by_key["evidence"]["status"] == "satisfied"
        assert by_key["doubts"]["status"] == "satisfied"
        text = sentencing_text(skeleton)
        assert "judgment:" in text
        assert "[x]" in text and "[ ]" in text


class TestSnapshotEvaluation:
    def test_snapshot_param_evaluates_the_frozen_case(self, tmp_path):
        doc = factories.sound_case_document()
        doc.case = doc.case.snapshot("v1")
        from casecalc.graph import BlockKind, Severity, defeater
        g = doc.case.add_node(defeater("D.late", "a new doubt", severity=Severity.SIGNIFICANT))
        g = g.add_link(Link("D.late", "C.top", LinkKind.ATTACK))
        doc.case = g
        head = evaluate_document(doc)
        frozen = evaluate_document(doc, EvaluationParams(snapshot="v1"))
        assert not head.severity.gate_passes
        assert frozen.severity.gate_passes


class TestDashboard:
    def test_color_counts_present(self, sound_doc):
        report = evaluate_document(sound_doc)
        stats = dashboard_stats(sound_doc, report)
        assert sum(stats["nodes_by_color"].values()) == len(report.valuation.assignments)
