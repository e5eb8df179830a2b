import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icsq.lang import Diagnostic, Span, parse, render_diagnostics, serialize
from icsq.lang.ast import (
    BridgeDecl,
    BridgeMapEntry,
    ConfigBuiltinBody,
    ConfigDecl,
    EffectEntry,
    EffectTableBody,
    MatrixBody,
    Scenario,
    StatementDecl,
    StatementNode,
    StructureBuiltinBody,
    StructureDecl,
    SubjectRef,
    SystemDecl,
    VectorBody,
)


class TestParseBasics:
    def test_empty_file(self):
        result = parse("")
        assert result.ok
        scenario = result.scenario
        assert scenario.systems == ()
        assert scenario.structures == ()
        assert scenario.configurations == ()
        assert scenario.bridges == ()
        assert scenario.statements == ()

    def test_comments_and_whitespace_only(self):
        result = parse("# nothing here\n\n   # more\n")
        assert result.ok

    def test_yields_with_config(self):
        result = parse("statement s1 { yields(particle, z_axis) = up }")
        assert result.ok
        node = result.scenario.statements[0].node
        assert node.kind == "yields"
        assert node.subject == SubjectRef("particle")
        assert node.config == "z_axis"
        assert node.outcome == "up"

    def test_configuration_free_claim_parses_as_intrinsic(self):
        # rejection is the checker's job; the parser must accept the form
        result = parse("statement bad { yields(particle) = up }")
        assert result.ok
        node = result.scenario.statements[0].node
        assert node.kind == "intrinsic-yields"
        assert node.config is None

    def test_dotted_subject(self):
        result = parse("statement s { yields(pair.left, a) = up }")
        assert result.ok
        assert result.scenario.statements[0].node.subject == SubjectRef("pair", "left")

    def test_tuple_outcome(self):
        result = parse("statement s { yields(pair, both) = (up, down) }")
        assert result.ok
        assert result.scenario.statements[0].node.outcome == ("up", "down")

    def test_joint_request(self):
        result = parse("statement s { joint(p, c1, c2) }")
        assert result.ok
        node = result.scenario.statements[0].node
        assert node.kind == "joint-request"
        assert (node.config, node.config2) == ("c1", "c2")

    def test_compose_with_bridge(self):
        result = parse(
            "statement s { compose { yields(p, a) = up yields(p, b) = down } using door }"
        )
        assert result.ok
        node = result.scenario.statements[0].node
        assert node.kind == "composite"
        assert len(node.children) == 2
        assert node.bridge == "door"

    def test_system_with_factors(self):
        result = parse("system pair dim 4 = left x right")
        assert result.ok
        system = result.scenario.systems[0]
        assert system.dim == 4
        assert system.factors == ("left", "right")

    def test_amplitude_forms(self):
        result = parse(
            "structure s over p { 1, -0.5, 0.5i, 1.0 + 2.0i, 0.25 - 0.75i, -1.5e-2 }"
        )
        assert result.ok
        amps = result.scenario.structures[0].body.amplitudes
        assert amps == (
            complex(1, 0),
            complex(-0.5, 0),
            complex(0, 0.5),
            complex(1, 2),
            complex(0.25, -0.75),
            complex(-0.015, 0),
        )

    def test_matrix_body(self):
        result = parse("structure rho over p { 0.5, 0 ; 0, 0.5 }")
        assert result.ok
        assert isinstance(result.scenario.structures[0].body, MatrixBody)

    def test_effect_table(self):
        result = parse(
            "config c over p {\n  a: [ 1, 0 ; 0, 0 ]\n  b: [ 0, 0 ; 0, 1 ]\n}"
        )
        assert result.ok
        body = result.scenario.configurations[0].body
        assert [e.label for e in body.effects] == ["a", "b"]

    def test_bridge_decl(self):
        result = parse(
            "bridge door physical via c { (up, down) -> opened (down, up) -> closed }"
        )
        assert result.ok
        bridge = result.scenario.bridges[0]
        assert bridge.kind == "physical"
        assert bridge.maps[0].source == ("up", "down")
        assert bridge.maps[0].target == "opened"


class TestParseErrors:
    def test_syntax_error_carries_position_and_hint(self):
        result = parse("system dim 2")
        assert not result.ok
        error = result.errors[0]
        assert error.span.line == 1
        assert error.expected

    def test_duplicate_identifier(self):
        result = parse("system p dim 2\nsystem p dim 3")
        assert not result.ok
        assert any("duplicate" in e.message for e in result.errors)

    def test_multiple_errors_in_source_order(self):
        result = parse("system dim 2\nstructure over p { 1 }\nconfig c over p builtin f()")
        assert not result.ok
        assert len(result.errors) >= 2
        lines = [e.span.line for e in result.errors]
        assert lines == sorted(lines)

    def test_compose_needs_two_claims(self):
        result = parse("statement s { compose { yields(p, c) = up } }")
        assert not result.ok

    def test_unknown_character(self):
        result = parse("system p dim 2 @")
        assert not result.ok

    def test_huge_integer_literal(self):
        result = parse("system p dim " + "9" * 100000)
        assert not result.ok

    def test_oversized_input_is_rejected(self):
        result = parse("#" + "x" * (1 << 20))
        assert not result.ok
        assert "size cap" in result.errors[0].message

    def test_deep_compose_nesting_is_capped(self):
        source = "statement s { " + "compose { " * 100 + "yields(p, c) = up " * 2 + "} " * 100 + "}"
        result = parse(source)
        assert not result.ok

    def test_unclosed_brace(self):
        result = parse("statement s { yields(p, c) = up")
        assert not result.ok

    def test_recovery_continues_after_bad_decl(self):
        result = parse("system !\nsystem ok dim 2\nsystem ! x")
        assert not result.ok
        assert len(result.errors) >= 2


class TestSpans:
    def test_spans_lie_within_input(self):
        source = (
            "system p dim 2\nstructure s over p builtin up_z\n"
            "config c over p builtin spin_axis(0.0)\n"
            "statement s1 {\n  compose {\n    yields(p, c) = up\n    yields(p, c) = down\n  }\n}\n"
        )
        result = parse(source)
        assert result.ok
        scenario = result.scenario
        decls = (
            list(scenario.systems) + list(scenario.structures)
            + list(scenario.configurations) + list(scenario.statements)
        )
        spans = [d.span for d in decls]

        def walk(node):
            spans.append(node.span)
            for child in node.children:
                walk(child)

        for statement in scenario.statements:
            walk(statement.node)
        for span in spans:
            assert 0 <= span.offset < len(source)
            assert span.offset + span.length <= len(source)
            assert span.line >= 1 and span.col >= 1

    def test_claim_span_points_at_claim_text(self):
        source = "statement bad { yields(particle) = up }"
        result = parse(source)
        node = result.scenario.statements[0].node
        excerpt = source[node.span.offset: node.span.offset + node.span.length]
        assert excerpt == "yields(particle) = up"


# --- round-trip ---------------------------------------------------------------

_FLOATS = st.floats(allow_nan=False, allow_infinity=False, width=64)
_AMPS = st.builds(complex, _FLOATS, _FLOATS)


def _vector_body():
    return st.builds(VectorBody, st.lists(_AMPS, min_size=1, max_size=4).map(tuple))


def _matrix_body():
    # a single-row table reads back as a vector, so matrix literals start at 2x2
    return st.integers(2, 3).flatmap(
        lambda n: st.lists(
            st.lists(_AMPS, min_size=n, max_size=n).map(tuple), min_size=n, max_size=n
        ).map(lambda rows: MatrixBody(tuple(rows)))
    )


_IDENT = st.sampled_from(["alpha", "beta", "gamma", "delta", "omega", "probe"])
_LABEL = st.sampled_from(["up", "down", "bright", "dark", "e0", "e1"])


def _structure_body():
    return st.one_of(
        st.builds(StructureBuiltinBody, _IDENT),
        _vector_body(),
        _matrix_body(),
    )


def _config_body():
    effects = st.lists(
        st.builds(
            EffectEntry,
            _LABEL,
            st.lists(st.lists(_AMPS, min_size=2, max_size=2).map(tuple), min_size=2, max_size=2).map(tuple),
        ),
        min_size=1,
        max_size=2,
        unique_by=lambda e: e.label,
    ).map(tuple)
    return st.one_of(
        st.builds(ConfigBuiltinBody, _IDENT, st.lists(_FLOATS, max_size=3).map(tuple)),
        st.builds(EffectTableBody, effects),
    )


_SUBJECT = st.one_of(
    st.builds(SubjectRef, _IDENT),
    st.builds(SubjectRef, _IDENT, _IDENT),
)

_OUTCOME = st.one_of(_LABEL, st.lists(_LABEL, min_size=2, max_size=3).map(tuple))


def _yields_node():
    return st.builds(
        lambda subject, config, outcome: StatementNode(
            kind="yields" if config is not None else "intrinsic-yields",
            subject=subject,
            config=config,
            outcome=outcome,
        ),
        _SUBJECT,
        st.one_of(st.none(), _IDENT),
        _OUTCOME,
    )


def _joint_node():
    return st.builds(
        lambda subject, c1, c2: StatementNode(
            kind="joint-request", subject=subject, config=c1, config2=c2
        ),
        _SUBJECT,
        _IDENT,
        _IDENT,
    )


def _composite_node(children):
    return st.builds(
        lambda kids, bridge: StatementNode(kind="composite", children=tuple(kids), bridge=bridge),
        st.lists(children, min_size=2, max_size=3),
        st.one_of(st.none(), _IDENT),
    )


_CLAIM = st.one_of(_yields_node(), _joint_node(), _composite_node(st.one_of(_yields_node(), _joint_node())))


@st.composite
def _scenarios(draw):
    n_systems = draw(st.integers(0, 2))
    systems = tuple(
        SystemDecl(
            f"sys{i}",
            draw(st.integers(1, 8)),
            draw(st.one_of(st.none(), st.tuples(_IDENT, _IDENT))),
        )
        for i in range(n_systems)
    )
    structures = tuple(
        StructureDecl(f"st{i}", draw(_IDENT), draw(_structure_body()))
        for i in range(draw(st.integers(0, 2)))
    )
    configs = tuple(
        ConfigDecl(f"cfg{i}", draw(_IDENT), draw(_config_body()))
        for i in range(draw(st.integers(0, 2)))
    )
    bridges = tuple(
        BridgeDecl(
            f"br{i}",
            draw(st.sampled_from(["physical", "epistemic"])),
            draw(_IDENT),
            tuple(
                draw(
                    st.lists(
                        st.builds(
                            BridgeMapEntry,
                            st.lists(_LABEL, min_size=1, max_size=3).map(tuple),
                            _OUTCOME,
                        ),
                        max_size=2,
                    )
                )
            ),
        )
        for i in range(draw(st.integers(0, 1)))
    )
    statements = tuple(
        StatementDecl(f"stmt{i}", draw(_CLAIM)) for i in range(draw(st.integers(0, 3)))
    )
    return Scenario(systems, structures, configs, bridges, statements)


class TestRoundTrip:
    @given(_scenarios())
    @settings(max_examples=200, deadline=None)
    def test_parse_serialize_round_trip(self, scenario):
        text = serialize(scenario)
        result = parse(text)
        assert result.ok, f"serialized form failed to parse: {result.errors}\n{text}"
        assert result.scenario == scenario

    def test_round_trip_is_stable_text(self):
        source = "system p dim 2\nstatement s { yields(p, c) = up }\n"
        first = parse(source).scenario
        text = serialize(first)
        assert serialize(parse(text).scenario) == text


class TestFuzzSmoke:
    @given(st.binary(max_size=2048))
    @settings(max_examples=300, deadline=None)
    def test_arbitrary_bytes_never_crash(self, data):
        result = parse(data.decode("utf-8", errors="replace"))
        assert result.ok or result.errors

    @given(st.text(alphabet="systemconfg{}()[]=.,;:->#\n \tdimoverbuiltin0123456789eE+-i", max_size=512))
    @settings(max_examples=300, deadline=None)
    def test_token_soup_never_crashes(self, text):
        result = parse(text)
        assert result.ok or result.errors


class TestRenderDiagnostics:
    def test_empty_json(self):
        assert render_diagnostics([], "json") == '{"diagnostics":[]}'

    def test_single_error_json_schema(self):
        diags = [Diagnostic("E001", "claim is ill-typed", Span(3, 5, 10, 40), "bad")]
        payload = json.loads(render_diagnostics(diags, "json"))
        assert payload == {
            "diagnostics": [
                {
                    "code": "E001",
                    "severity": "error",
                    "message": "claim is ill-typed",
                    "span": {"line": 3, "col": 5, "len": 10},
                    "statement": "bad",
                }
            ]
        }

    def test_json_key_order_is_stable(self):
        diags = [Diagnostic("W001", "redundant", Span(1, 1, 1, 0), "s")]
        text = render_diagnostics(diags, "json")
        assert text.index('"code"') < text.index('"severity"') < text.index('"message"')
        assert text.index('"span"') < text.index('"statement"')

    def test_two_errors_render_in_given_order(self):
        diags = [
            Diagnostic("E001", "first", Span(1, 1, 3, 0), "a"),
            Diagnostic("E002", "second", Span(2, 1, 3, 10), "b"),
        ]
        text = render_diagnostics(diags, "text")
        assert text.index("first") < text.index("second")

    def test_text_format_shows_carets(self):
        source = "statement bad { yields(particle) = up }"
        diags = [Diagnostic("E001", "ill-typed", Span(1, 17, 21, 16), "bad")]
        text = render_diagnostics(diags, "text", source=source)
        assert "^" * 21 in text

    def test_color_is_opt_in(self, monkeypatch):
        diags = [Diagnostic("E001", "boom", Span(1, 1, 1, 0), "s")]
        monkeypatch.delenv("ICSQ_COLOR", raising=False)
        assert "\x1b[" not in render_diagnostics(diags, "text")
        monkeypatch.setenv("ICSQ_COLOR", "1")
        assert "\x1b[" in render_diagnostics(diags, "text")

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            render_diagnostics([], "yaml")


class TestWarningSeverity:
    def test_w_codes_are_warnings(self):
        diag = Diagnostic("W001", "redundant bridge", Span(1, 1, 1, 0), "s")
        assert diag.severity == "warning"
        assert Diagnostic("E004", "bad bridge", Span(1, 1, 1, 0), "s").severity == "error"
