"""Textual rule names used by the command line.

Grammar::

    identity | grid | grid-grey-black | grid-grey-white-black
    xor-ca | xor-ca:00:0,01:1,10:1,11:0[;q=0] | ca:<table>[;q=<state>]
    perm:0=1,1=0
    mutant-constant-name | mutant-boundary-conflict | mutant-radius-cheat
    <rule>+<rule>[@R]            composition, optional explicit radius
"""

from __future__ import annotations

from cgd.engine import compose
from cgd.errors import BadParameters
from cgd.mutants import mutant_rules
from cgd.rules import (
    XOR_TABLE,
    LocalRule,
    ca_rule,
    identity_rule,
    inflating_grid_rule,
    permutation_rule,
)


def _ca_table(body: str) -> tuple[dict, str]:
    table_part, _, opt = body.partition(";")
    q = "0"
    if opt:
        key, _, val = opt.partition("=")
        if key.strip() != "q" or not val:
            raise BadParameters(f"bad CA option {opt!r}")
        q = val.strip()
    h = {}
    for entry in filter(None, table_part.split(",")):
        lhs, sep, out = entry.partition(":")
        if not sep or len(lhs) != 2 or not out:
            raise BadParameters(f"bad CA table entry {entry!r}; expected e.g. 01:1")
        h[(lhs[0], lhs[1])] = out
    return h, q


def _single(text: str) -> LocalRule:
    text = text.strip()
    fixed = {
        "identity": identity_rule,
        "grid": lambda: inflating_grid_rule("plain"),
        "grid-grey-black": lambda: inflating_grid_rule("grey-black"),
        "grid-grey-white-black": lambda: inflating_grid_rule("grey-white-black"),
    }
    if text in fixed:
        return fixed[text]()
    mutants = mutant_rules()
    if text in mutants:
        return mutants[text]
    if text == "xor-ca":
        return ca_rule(XOR_TABLE, "0", "xor-ca")
    if text == "perm":
        return permutation_rule({"0": "1", "1": "0"})
    head, sep, body = text.partition(":")
    if sep and head in ("xor-ca", "ca"):
        h, q = _ca_table(body)
        return ca_rule(h, q, name=text)
    if sep and head == "perm":
        perm = {}
        for entry in filter(None, body.split(",")):
            a, eq, b = entry.partition("=")
            if not eq:
                raise BadParameters(f"bad permutation entry {entry!r}; expected a=b")
            perm[a] = b
        return permutation_rule(perm)
    raise BadParameters(f"unknown rule {text!r}")


def parse_rule(text: str) -> LocalRule:
    """Build the rule named by ``text``; ``a+b`` composes left to right."""
    body, at, radius = text.rpartition("@") if "@" in text else (text, "", "")
    parts = body.split("+")
    rule = _single(parts[0])
    for i, part in enumerate(parts[1:], 1):
        last = i == len(parts) - 1
        R = None
        if at and last:
            if not radius.isdigit():
                raise BadParameters(f"bad composition radius {radius!r}")
            R = int(radius)
        rule = compose(rule, _single(part), radius=R)
    if at and len(parts) == 1:
        raise BadParameters("an explicit radius only applies to a composition")
    return rule
