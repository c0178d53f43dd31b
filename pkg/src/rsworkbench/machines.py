"""A toy catalog of step-bounded oracle programs, codings of pairs and strings.

Programs are short register-machine listings.  Registers ``a``..``d`` start at
0 and ``x`` holds the input.  An operand is an integer literal or a register
name.  Each executed instruction costs one step; an oracle query is one
instruction and so one step.

Mnemonics::

    SET r v      r := v
    ADD r v      r := r + v
    SUB r v      r := max(r - v, 0)
    MUL r v      r := r * v
    QUERY r v    r := oracle(v)   (stalls forever if oracle(v) is undefined)
    JZ r L       jump to instruction L when r == 0
    JNZ r L      jump to instruction L when r != 0
    JMP L        jump to instruction L
    HALT v       stop with output v

A listing must end with HALT or JMP so control never falls off the end.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Optional, Sequence, Union

from .epsets import UPSet

REGISTERS = ("a", "b", "c", "d", "x")
MNEMONICS = {
    "SET": 2, "ADD": 2, "SUB": 2, "MUL": 2, "QUERY": 2,
    "JZ": 2, "JNZ": 2, "JMP": 1, "HALT": 1,
}

Operand = Union[int, str]


# codings

def pair(m: int, n: int) -> int:
    """Cantor pairing."""
    return (m + n) * (m + n + 1) // 2 + n


def unpair(k: int) -> tuple[int, int]:
    w = (isqrt(8 * k + 1) - 1) // 2
    n = k - w * (w + 1) // 2
    return w - n, n


def triple(a: int, b: int, c: int) -> int:
    return pair(a, pair(b, c))


def untriple(k: int) -> tuple[int, int, int]:
    a, rest = unpair(k)
    b, c = unpair(rest)
    return a, b, c


def string_code(sigma: str) -> int:
    """Bijection from bit words onto N: binary value of '1' + sigma, minus 1."""
    if any(ch not in "01" for ch in sigma):
        raise ValueError(f"not a bit word: {sigma!r}")
    return int("1" + sigma, 2) - 1


def string_decode(code: int) -> str:
    if code < 0:
        raise ValueError("codes are natural numbers")
    return bin(code + 1)[3:]


# oracles

@dataclass(frozen=True)
class OracleValue:
    """A function N -> N given by a finite table and a tail rule.

    The tail is a constant, the characteristic function of a UPSet, or None
    for a partial oracle (a finite string) that is undefined past the table.
    """

    table: tuple[int, ...] = ()
    tail: Union[int, UPSet, None] = 0

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if any(v < 0 for v in self.table):
            raise ValueError("oracle values are natural numbers")

    @classmethod
    def constant(cls, value: int) -> "OracleValue":
        return cls((), value)

    @classmethod
    def from_bits(cls, word: str) -> "OracleValue":
        """A partial oracle for a finite bit string."""
        return cls(tuple(int(b) for b in word), None)

    @classmethod
    def from_upset(cls, s: UPSet) -> "OracleValue":
        return cls((), s)

    def __call__(self, n: int) -> Optional[int]:
        if n < 0:
            return None
        if n < len(self.table):
            return self.table[n]
        if self.tail is None:
            return None
        if isinstance(self.tail, UPSet):
            return 1 if n in self.tail else 0
        return self.tail

    def is_total(self) -> bool:
        return self.tail is not None

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self(i) for i in range(n))

    def bits(self, n: int) -> str:
        return "".join(str(self(i)) for i in range(n))

    def to_json(self) -> dict:
        if isinstance(self.tail, UPSet):
            tail = {"upset": self.tail.to_json()}
        elif self.tail is None:
            tail = None
        else:
            tail = {"constant": self.tail}
        return {"table": list(self.table), "tail": tail}

    @classmethod
    def from_json(cls, data) -> "OracleValue":
        if isinstance(data, str):
            return cls.from_bits(data)
        tail = data.get("tail", {"constant": 0})
        if tail is None:
            rule = None
        elif "upset" in tail:
            rule = UPSet.from_json(tail["upset"])
        else:
            rule = int(tail["constant"])
        return cls(tuple(data.get("table", ())), rule)


# programs

@dataclass(frozen=True)
class Program:
    """A listing plus a halting certificate.

    ``halt_bound`` asserts: on every input and oracle, if the program halts
    at all then it halts within that many steps.  None means the catalog
    makes no such claim.
    """

    name: str
    code: tuple[tuple, ...]
    halt_bound: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "code", tuple(tuple(ins) for ins in self.code))
        validate_listing(self.code)

    def to_json(self) -> dict:
        out = {"name": self.name, "code": [list(ins) for ins in self.code]}
        if self.halt_bound is not None:
            out["halt_bound"] = self.halt_bound
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Program":
        return cls(data["name"], tuple(tuple(ins) for ins in data["code"]), data.get("halt_bound"))


def _is_register(op) -> bool:
    return isinstance(op, str) and op in REGISTERS


def validate_listing(code: Sequence[tuple]) -> None:
    if not code:
        raise ValueError("empty listing")
    for pc, ins in enumerate(code):
        if not ins or ins[0] not in MNEMONICS:
            raise ValueError(f"instruction {pc}: unknown mnemonic in {ins!r}")
        op, args = ins[0], ins[1:]
        if len(args) != MNEMONICS[op]:
            raise ValueError(f"instruction {pc}: {op} takes {MNEMONICS[op]} operands")
        if op in ("SET", "ADD", "SUB", "MUL", "QUERY", "JZ", "JNZ"):
            if not _is_register(args[0]) or args[0] == "x":
                raise ValueError(f"instruction {pc}: {op} needs a writable register first")
        if op in ("JZ", "JNZ", "JMP"):
            target = args[-1]
            if not isinstance(target, int) or not 0 <= target < len(code):
                raise ValueError(f"instruction {pc}: jump target {target!r} out of range")
        for a in args:
            if not isinstance(a, int) and not _is_register(a):
                raise ValueError(f"instruction {pc}: bad operand {a!r}")
            if isinstance(a, int) and a < 0:
                raise ValueError(f"instruction {pc}: negative literal {a}")
    if code[-1][0] not in ("HALT", "JMP"):
        raise ValueError("listing must end with HALT or JMP")


def run(code: Sequence[tuple], oracle: OracleValue, x: int, steps: int) -> Optional[int]:
    """Run a listing for at most ``steps`` instructions; the output, or None if still running."""
    regs = {"a": 0, "b": 0, "c": 0, "d": 0, "x": x}

    def val(op):
        return regs[op] if isinstance(op, str) else op

    pc = 0
    for _ in range(steps):
        op, *args = code[pc]
        pc += 1
        if op == "HALT":
            return val(args[0])
        if op == "JMP":
            pc = args[0]
        elif op == "JZ":
            if regs[args[0]] == 0:
                pc = args[1]
        elif op == "JNZ":
            if regs[args[0]] != 0:
                pc = args[1]
        elif op == "QUERY":
            answer = oracle(val(args[1]))
            if answer is None:
                return None  # use beyond a partial oracle: the computation never returns
            regs[args[0]] = answer
        elif op == "SET":
            regs[args[0]] = val(args[1])
        elif op == "ADD":
            regs[args[0]] += val(args[1])
        elif op == "SUB":
            regs[args[0]] = max(regs[args[0]] - val(args[1]), 0)
        elif op == "MUL":
            regs[args[0]] *= val(args[1])
    return None


@dataclass(frozen=True)
class FunctionalCatalog:
    """A finite indexed list of programs standing in for an effective enumeration."""

    programs: tuple[Program, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "programs", tuple(self.programs))

    def __len__(self) -> int:
        return len(self.programs)

    def index(self, name: str) -> int:
        for e, prog in enumerate(self.programs):
            if prog.name == name:
                return e
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"programs": [p.to_json() for p in self.programs]}

    @classmethod
    def from_json(cls, data) -> "FunctionalCatalog":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, list):
            data = {"programs": data}
        return cls(tuple(Program.from_json(p) for p in data["programs"]))

    @classmethod
    def of(cls, *names: str) -> "FunctionalCatalog":
        return cls(tuple(SEED_PROGRAMS[n] for n in names))


def eval_steps(cat: FunctionalCatalog, e: int, oracle: OracleValue, x: int, s: int) -> Optional[int]:
    """Output of program e on input x with the given oracle within s steps, or None."""
    if not 0 <= e < len(cat.programs):
        raise IndexError(f"program index {e} outside catalog of size {len(cat.programs)}")
    return run(cat.programs[e].code, oracle, x, s)


def halts_certified(cat: FunctionalCatalog, e: int, oracle: OracleValue, x: int) -> Optional[int]:
    """Exact halting using the program's certificate: the output, or None if it diverges."""
    bound = cat.programs[e].halt_bound
    if bound is None:
        raise ValueError(f"program {cat.programs[e].name!r} carries no halting certificate")
    return eval_steps(cat, e, oracle, x, bound)


def jump_string(cat: FunctionalCatalog, oracle: OracleValue, s: int) -> str:
    """Stage-s approximation to the jump: bit e says program e halted on e within s steps."""
    bits = []
    for e in range(s):
        halted = e < len(cat.programs) and eval_steps(cat, e, oracle, e, s) is not None
        bits.append("1" if halted else "0")
    return "".join(bits)


SEED_PROGRAMS = {
    "e_div": Program("e_div", (("JMP", 0),), halt_bound=0),
    "e_zero": Program("e_zero", (("HALT", 0),), halt_bound=1),
    "e_one": Program("e_one", (("HALT", 1),), halt_bound=1),
    "e_echo": Program("e_echo", (("QUERY", "a", 0), ("HALT", "a")), halt_bound=2),
    # diagonal echo: output oracle(x)
    "e_diag": Program("e_diag", (("QUERY", "a", "x"), ("HALT", "a")), halt_bound=2),
    # halts with 0 iff oracle(x) == 0, otherwise loops
    "e_zero_test": Program(
        "e_zero_test",
        (("QUERY", "a", "x"), ("JZ", "a", 3), ("JMP", 2), ("HALT", 0)),
        halt_bound=3,
    ),
}


def seed_catalog(names: Iterable[str] = ("e_div", "e_zero")) -> FunctionalCatalog:
    return FunctionalCatalog.of(*names)
