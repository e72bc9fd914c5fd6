"""One targeted corruption of the demo's final graph per validator rule."""

from __future__ import annotations

from collections.abc import Callable

from oasis2.graph import TypedGraph
from oasis2.vocab import Layer, Prop

EX = "urn:example:swb#"
T_TASK = EX + "mint_ERC721_token_task"
B_TASK = EX + "SWB_mint_ERC721_token_task"


def _tag_flip(g: TypedGraph) -> None:
    g.assert_type(EX + "ERC721_token_minter", Layer.EXECUTION)


def _drop_operator(g: TypedGraph) -> None:
    g.remove_triple(T_TASK, Prop.HAS_OPERATOR, T_TASK + "_operator")


def _drop_reference(g: TypedGraph) -> None:
    g.remove_triple(T_TASK + "_operator", Prop.REFERS_EXACTLY_TO, EX + "mint")


def _drop_goal_overload(g: TypedGraph) -> None:
    g.remove_triple(EX + "SWB_mint_ERC721_token_goal", Prop.OVERLOADS_GOAL, EX + "mint_ERC721_token_goal")


def _insert_cycle(g: TypedGraph) -> None:
    g.add_triple(B_TASK, Prop.DEPENDS_ON, B_TASK)


def _drop_goal_drawn_by(g: TypedGraph) -> None:
    g.remove_triple(EX + "SWB_mint_ERC721_token_goal_execution", Prop.GOAL_EXECUTION_DRAWN_BY,
                    EX + "SWB_mint_ERC721_token_goal")


def _drop_goal_entrusted_by(g: TypedGraph) -> None:
    g.remove_triple(EX + "mint_SWB_token32_goal_entrustment", Prop.GOAL_ENTRUSTED_BY,
                    EX + "mint_SWB_token32_goal")


def _corrupt_binding(g: TypedGraph) -> None:
    g.remove_type(EX + "SWB_token32", EX + "EthereumTokenERC721")


MUTATIONS: dict[str, Callable[[TypedGraph], None]] = {
    "V1": _tag_flip,
    "V2": _drop_operator,
    "V3": _drop_reference,
    "V4": _drop_goal_overload,
    "V5": _insert_cycle,
    "V6": _drop_goal_drawn_by,
    "V7": _drop_goal_entrusted_by,
    "V8": _corrupt_binding,
}


def mutated(g: TypedGraph, rule: str) -> TypedGraph:
    out = g.copy()
    MUTATIONS[rule](out)
    return out
