#!/usr/bin/env python3
"""Convert a flat gate-level structural Verilog netlist to ISCAS85 .bench.

Handles the primitive-gate subset used by the ISCAS85 Verilog distributions:
and/nand/or/nor/xor/xnor/not/buf instances, plus `assign a = b;` (emitted as
BUFF). Constant assigns (`assign a = 1'b0;`) have no .bench equivalent; the
net is dropped together with its OUTPUT declaration.
"""
import re
import sys

PRIMS = {"and": "AND", "nand": "NAND", "or": "OR", "nor": "NOR",
         "xor": "XOR", "xnor": "XNOR", "not": "NOT", "buf": "BUFF"}


def names(body):
    return [t for t in re.split(r"[\s,]+", body) if t]


def convert(text, design):
    text = re.sub(r"//[^\n]*", "", text)
    text = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
    inputs, outputs, gates, dropped = [], [], [], set()
    for stmt in text.split(";"):
        stmt = " ".join(stmt.split())
        if not stmt:
            continue
        head = stmt.split(" ", 1)[0]
        if head == "input":
            inputs += names(stmt[len("input"):])
        elif head == "output":
            outputs += names(stmt[len("output"):])
        elif head == "assign":
            lhs, rhs = (s.strip() for s in stmt[len("assign"):].split("="))
            if "'" in rhs:
                dropped.add(lhs)
            else:
                gates.append((lhs, "BUFF", [rhs]))
        elif head in PRIMS:
            m = re.match(r"\w+\s+\w*\s*\((.*)\)$", stmt)
            pins = names(m.group(1))
            gates.append((pins[0], PRIMS[head], pins[1:]))
    lines = [f"# {design}",
             f"# {len(inputs)} inputs, {len(outputs) - len(dropped & set(outputs))} outputs, {len(gates)} gates",
             ""]
    lines += [f"INPUT({n})" for n in inputs]
    lines.append("")
    lines += [f"OUTPUT({n})" for n in outputs if n not in dropped]
    lines.append("")
    lines += [f"{out} = {fn}({', '.join(ins)})" for out, fn, ins in gates]
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    src, design = sys.argv[1], sys.argv[2]
    with open(src) as f:
        sys.stdout.write(convert(f.read(), design))
