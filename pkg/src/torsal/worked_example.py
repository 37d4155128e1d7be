"""The worked example: three hypertori in a two-torus, with reference data.

The arrangement has characters (1, 0), (1, 2), and (0, 1), all with
offset zero.  Its layer poset has six layers: the torus, three circle
layers, and the two points P0 = (0, 0) and P1 = (0, 1/2).  The
reference restriction table below records the expected entries under
a specific set of choices: every layer takes the base chamber
(-1, +1, +1) except the layer of the last hypertorus, which takes
(-1, -1, +1); the circle orientations are pinned by gallery chambers
so that the winding vectors are (0, -1) for H0, (2, -1) for H1, and
(1, 0) for H2; and broken circuits use the reversed index order.

Two reference cells are known to disagree with what the solver
produces, and the comparison reports them instead of matching them.
Both corrections follow from internal consistency.  First, the
restriction of the square dual of H1 onto the stratum of H2 carries
coefficient one, not two: the degree-two class om[1,2]P0 restricts
onto that stratum to the product of the H1 and H2 restrictions, and
its own reference entry lam(H2)om(H2) has coefficient one.  Second,
the degree-two class at P1 is labelled by the index set {0, 1}, not
{1, 2}: the point P1 does not lie on hypertorus 2, so no index set
at P1 may contain it.
"""

from torsal.model import ToricArrangement
from torsal.ring import RingData, make_choices

__all__ = [
    "CHAMBER_B0",
    "CHAMBER_B1",
    "EX_DATA",
    "EXPECTED_DISCREPANCIES",
    "REFERENCE_TABLE",
    "ComparisonReport",
    "arrangement",
    "choice_overrides",
    "compare_reference",
    "reference_ring",
]

EX_DATA = [((1, 0), 0), ((1, 2), 0), ((0, 1), 0)]

CHAMBER_B0 = (-1, 1, 1)
CHAMBER_B1 = (-1, -1, 1)


def arrangement():
    """A fresh copy of the worked example arrangement."""
    return ToricArrangement(2, EX_DATA)


def choice_overrides():
    """The choices that align the computed table with the reference.

    Layers are addressed by their support sets.  The two point layers
    keep their defaults, which do not influence the table.
    """
    return {
        "base": {
            (): CHAMBER_B0,
            (0,): CHAMBER_B0,
            (1,): CHAMBER_B0,
            (2,): CHAMBER_B1,
        },
        "gallery": {(0,): CHAMBER_B0},
        "nbc_reverse": True,
    }


def reference_ring():
    """Ring data of the worked example under the reference choices."""
    arr = arrangement()
    return RingData(arr, make_choices(arr, choice_overrides()))


def _cell(coeff, *factors):
    return (coeff, tuple(factors))


_LAM = "lam"
_OM = "om"

REFERENCE_TABLE = {
    ("lam(H0)", "S_T"): [_cell(1, (_LAM, "H0"))],
    ("lam(H0)", "S_H0"): [_cell(1, (_LAM, "H0"))],
    ("lam(H0)", "S_H1"): [_cell(1, (_LAM, "H1"))],
    ("lam(H2)", "S_T"): [_cell(1, (_LAM, "H2"))],
    ("lam(H2)", "S_H1"): [_cell(2, (_LAM, "H1"))],
    ("lam(H2)", "S_H2"): [_cell(1, (_LAM, "H2"))],
    ("om(H0)", "S_H0"): [_cell(1, (_OM, "H0"))],
    ("om(H0)", "S_P0"): [_cell(1, (_OM, "H0"))],
    ("om(H0)", "S_P1"): [_cell(1, (_OM, "H0"))],
    ("om(H1)", "S_H1"): [_cell(1, (_OM, "H1"))],
    ("om(H1)", "S_H2"): [_cell(2, (_LAM, "H2"))],
    ("om(H1)", "S_P0"): [_cell(1, (_OM, "H1"))],
    ("om(H1)", "S_P1"): [_cell(1, (_OM, "H1"))],
    ("om(H2)", "S_H2"): [_cell(1, (_OM, "H2"))],
    ("om(H2)", "S_P0"): [_cell(1, (_OM, "H2"))],
    ("om[0,2]P0", "S_P0"): [_cell(1, (_OM, "H0"), (_OM, "H2"))],
    ("om[1,2]P0", "S_H2"): [_cell(1, (_LAM, "H2"), (_OM, "H2"))],
    ("om[1,2]P0", "S_P0"): [_cell(1, (_OM, "H1"), (_OM, "H2"))],
    ("om[1,2]P1", "S_P1"): [_cell(1, (_OM, "H1"), (_OM, "H2"))],
}

EXPECTED_DISCREPANCIES = [
    {
        "kind": "cell",
        "row": "om(H1)",
        "column": "S_H2",
        "reference": [_cell(2, (_LAM, "H2"))],
        "computed": [_cell(1, (_LAM, "H2"))],
        "note": (
            "the product rule for om[1,2]P0 forces coefficient one in "
            "both of its factors' restrictions"
        ),
    },
    {
        "kind": "row-label",
        "reference_row": "om[1,2]P1",
        "computed_row": "om[0,1]P1",
        "computed_cells": {
            "S_P1": [_cell(1, (_OM, "H0"), (_OM, "H1"))],
        },
        "note": (
            "P1 lies on hypertori 0 and 1 only, so its index sets "
            "cannot contain 2"
        ),
    },
]


class ComparisonReport:
    """Outcome of checking a computed table against the reference.

    ``matches`` lists cells that agree, ``discrepancies`` the expected
    disagreements that were found with the predicted values, and
    ``unexpected`` anything else: a missing row, a stray cell, or an
    expected discrepancy whose computed value changed.  The report is
    true when every reference cell is accounted for and nothing
    unexpected appeared.
    """

    def __init__(self, matches, discrepancies, unexpected, row_signs):
        self.matches = matches
        self.discrepancies = discrepancies
        self.unexpected = unexpected
        self.row_signs = row_signs

    def __bool__(self):
        return not self.unexpected and len(self.discrepancies) == len(
            EXPECTED_DISCREPANCIES
        )

    def lines(self):
        """Human readable summary, one line per reference row or finding."""
        out = ["reference cells matched: %d" % len(self.matches)]
        for d in self.discrepancies:
            if d["kind"] == "cell":
                out.append(
                    "documented discrepancy at (%s, %s): reference %s, "
                    "computed %s (%s)" % (
                        d["row"], d["column"],
                        _format(d["reference"]), _format(d["computed"]),
                        d["note"],
                    )
                )
            else:
                out.append(
                    "documented discrepancy in a row label: reference %s, "
                    "computed %s (%s)" % (
                        d["reference_row"], d["computed_row"], d["note"],
                    )
                )
        for u in self.unexpected:
            out.append("unexpected: %s" % u)
        return out

    def __repr__(self):
        return "ComparisonReport(ok=%s)" % bool(self)


def _format(entry):
    parts = []
    for coeff, label in entry:
        name = "".join("%s(%s)" % (k, v) for k, v in label)
        parts.append(name if coeff == 1 else "%s*%s" % (coeff, name))
    return " + ".join(parts) or "0"


def _scale(entry, sign):
    return [(sign * c, label) for c, label in entry]


def compare_reference(table):
    """Check a computed restriction table against the reference values.

    Rows are matched by label, each up to one global sign.  The two
    documented discrepancies must appear exactly as predicted; any
    other difference is reported as unexpected.
    """
    expected_cells = {
        (d["row"], d["column"]): d
        for d in EXPECTED_DISCREPANCIES
        if d["kind"] == "cell"
    }
    expected_rows = {
        d["reference_row"]: d
        for d in EXPECTED_DISCREPANCIES
        if d["kind"] == "row-label"
    }
    reference_rows = sorted({row for row, _ in REFERENCE_TABLE})
    matches = []
    discrepancies = []
    unexpected = []
    row_signs = {}
    computed_rows = set(table.rows)
    known = set(reference_rows) - set(expected_rows)
    known.update(d["computed_row"] for d in expected_rows.values())
    for row in sorted(computed_rows - known):
        unexpected.append("row %s is not in the reference" % row)

    for row in reference_rows:
        if row in expected_rows:
            d = expected_rows[row]
            twin = d["computed_row"]
            if row in computed_rows:
                unexpected.append(
                    "row %s was computed although its label is documented "
                    "as different" % row
                )
                continue
            if twin not in computed_rows:
                unexpected.append("row %s is missing (for reference row %s)"
                                  % (twin, row))
                continue
            twin_cells = {
                col: table.entry(twin, col)
                for col in table.cols
                if table.entry(twin, col)
            }
            wanted = {
                col: entry for col, entry in d["computed_cells"].items()
            }
            if twin_cells in (wanted, {
                col: _scale(entry, -1) for col, entry in wanted.items()
            }):
                discrepancies.append(d)
            else:
                unexpected.append(
                    "row %s does not carry the predicted cells: %s"
                    % (twin, twin_cells)
                )
            continue
        if row not in computed_rows:
            unexpected.append("row %s is missing" % row)
            continue
        reference = {
            col: entry
            for (r, col), entry in REFERENCE_TABLE.items()
            if r == row
        }
        best = None
        for sign in (1, -1):
            mismatched = []
            for col in table.cols:
                got = table.entry(row, col)
                want = _scale(reference.get(col, []), sign)
                if sorted(got) != sorted(want):
                    mismatched.append((col, got, reference.get(col, [])))
            if best is None or len(mismatched) < len(best[1]):
                best = (sign, mismatched)
        sign, mismatched = best
        row_signs[row] = sign
        for col, got, want in mismatched:
            d = expected_cells.get((row, col))
            if d is not None and sorted(got) in (
                sorted(d["computed"]), sorted(_scale(d["computed"], -1))
            ):
                discrepancies.append(d)
            else:
                unexpected.append(
                    "cell (%s, %s): reference %s, computed %s"
                    % (row, col, _format(want), _format(got))
                )
        matches.extend(
            (row, col)
            for col in table.cols
            if reference.get(col) and all(col != c for c, _, _ in mismatched)
        )
    return ComparisonReport(matches, discrepancies, unexpected, row_signs)
