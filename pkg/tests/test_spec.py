from __future__ import annotations

import json

import pytest

from oasis2.demo import BEHAVIOUR_SPEC, PLAN_SPEC, TEMPLATE_SPEC
from oasis2.errors import SpecError
from oasis2.spec import TaskSpec, load_spec, spec_from_dict
from oasis2.structure import AsNew, Exactly
from conftest import SPECS

EX = "urn:example:swb#"


def _minimal(**task) -> dict:
    task = {"id": "ex:t", "operator": "ex:mint", **task}
    return {"prefixes": {"ex": EX}, "agent": "ex:a",
            "behaviours": [{"id": "ex:b", "goals": [{"id": "ex:g", "tasks": [task]}]}]}


def test_shipped_specs_match_the_demo_dicts():
    for name, data in (("mint_template", TEMPLATE_SPEC), ("mint_behaviour", BEHAVIOUR_SPEC),
                       ("mint_plan", PLAN_SPEC)):
        assert load_spec(SPECS / f"{name}.yaml") == spec_from_dict(data)


def test_plan_spec_fields():
    doc = load_spec(SPECS / "mint_plan.yaml")
    task = doc.spec.tasks()[0]
    assert doc.requester == EX + "SWB_customer"
    assert doc.spec.agent is None
    assert task.operator == Exactly(EX + "mint")
    assert task.object == Exactly(EX + "SWB_token32")
    assert doc.submitted_to == {EX + "mint_SWB_token32_task": EX + "SWB_mint_ERC721_token_task"}
    assert doc.facts.has_class(EX + "SWB_token32", EX + "EthereumTokenERC721")


def test_json_is_accepted(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(BEHAVIOUR_SPEC))
    assert load_spec(path) == spec_from_dict(BEHAVIOUR_SPEC)


def test_as_new_reference_and_absolute_iris():
    doc = spec_from_dict(_minimal(object={"as_new": "urn:x:ent", "instance_of": ["ex:C"]}))
    assert doc.spec.tasks()[0].object == AsNew("urn:x:ent", [EX + "C"])


def test_element_iris_follow_the_task_id():
    one = TaskSpec("urn:x:t", Exactly("urn:x:op"), outputs=[Exactly("urn:x:o")])
    assert one.element_iris() == {"operator": "urn:x:t_operator", "output_1": "urn:x:t_output"}
    two = TaskSpec("urn:x:t", Exactly("urn:x:op"), Exactly("urn:x:arg"), Exactly("urn:x:o"),
                   inputs=[Exactly("urn:x:i"), Exactly("urn:x:j")])
    assert two.element_iris() == {
        "operator": "urn:x:t_operator", "argument": "urn:x:t_operator_argument",
        "object": "urn:x:t_object", "input_1": "urn:x:t_input_1", "input_2": "urn:x:t_input_2"}


@pytest.mark.parametrize("data, fragment", [
    ({"agent": "urn:x:a", "behaviours": []}, "no behaviours"),
    ({"agent": "urn:x:a"}, "no behaviours"),
    ([1, 2], "mapping"),
    (_minimal(operator=None), "operator"),
    ({**_minimal(), "behaviours": [{"id": "ex:b", "goals": []}]}, "no goals"),
    ({**_minimal(), "behaviours": [{"id": "ex:b", "goals": [{"id": "ex:g", "tasks": []}]}]}, "no tasks"),
    (_minimal(id="ex:b"), "duplicate"),
    (_minimal(id="bare"), "neither"),
    (_minimal(object={"weird": 1}), "cannot read"),
    (_minimal(depends_on=["ex:t"]), "cycle"),
    (_minimal(depends_on=["ex:elsewhere"]), "outside"),
    (_minimal(inputs="ex:x"), "must be a list"),
    (_minimal(object="ex:g"), "structural"),
    (_minimal(object="urn:x:a b"), "IRI"),
    ({"agent": "urn:x:a", "behaviours": ["urn:x:b"]}, "must be a mapping"),
])
def test_malformed_specs_raise_spec_error(data, fragment):
    with pytest.raises(SpecError, match=fragment):
        spec_from_dict(data)


def test_unreadable_files(tmp_path):
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    with pytest.raises(SpecError, match="empty"):
        load_spec(empty)
    broken = tmp_path / "broken.yaml"
    broken.write_text("behaviours: [unclosed\n")
    with pytest.raises(SpecError):
        load_spec(broken)
