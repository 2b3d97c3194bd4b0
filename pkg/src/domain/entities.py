"""
Domain entities for near-factorization search.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from math import prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import factorint

from .exceptions import InvalidElementError, ParameterError

GroupElement = Tuple[int, ...]
ElementIndex = int
Cell = Tuple[int, int]


@dataclass(frozen=True)
class GroupSpec:
    """Finite abelian group written as an ordered product of cyclic groups Z_{n_i}.

    Elements are coordinate tuples; the canonical index is the mixed-radix
    encoding with the last factor varying fastest, so index 0 is the identity.
    """
    factors: Tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(n_i) for n_i in self.factors)
        if not factors:
            raise ParameterError("a group needs at least one cyclic factor")
        for n_i in factors:
            if n_i < 2:
                raise ParameterError(f"cyclic factor order must be at least 2, got {n_i}")
        object.__setattr__(self, "factors", factors)

    @cached_property
    def order(self) -> int:
        return prod(self.factors)

    @cached_property
    def primary(self) -> Tuple[int, ...]:
        """Prime-power cyclic components, sorted ascending."""
        components = []
        for n_i in self.factors:
            components.extend(p ** e for p, e in factorint(n_i).items())
        return tuple(sorted(components))

    @cached_property
    def is_cyclic(self) -> bool:
        seen = set()
        for q in self.primary:
            p = min(factorint(q))
            if p in seen:
                return False
            seen.add(p)
        return True

    @property
    def literal(self) -> str:
        return "x".join(f"Z{n_i}" for n_i in self.factors)

    @property
    def canonical_literal(self) -> str:
        return "x".join(f"Z{q}" for q in self.primary)

    @property
    def identity(self) -> GroupElement:
        return (0,) * len(self.factors)

    @cached_property
    def _strides(self) -> Tuple[int, ...]:
        strides = []
        step = 1
        for n_i in reversed(self.factors):
            strides.append(step)
            step *= n_i
        return tuple(reversed(strides))

    def validate(self, g: Sequence[int]) -> GroupElement:
        if len(g) != len(self.factors):
            raise InvalidElementError(
                f"element {tuple(g)} has {len(g)} coordinates, {self.literal} needs {len(self.factors)}"
            )
        for c, n_i in zip(g, self.factors):
            if not 0 <= c < n_i:
                raise InvalidElementError(f"coordinate {c} of {tuple(g)} is outside [0, {n_i})")
        return tuple(g)

    def encode(self, g: Sequence[int]) -> ElementIndex:
        g = self.validate(g)
        return sum(c * stride for c, stride in zip(g, self._strides))

    def decode(self, idx: ElementIndex) -> GroupElement:
        if not 0 <= idx < self.order:
            raise InvalidElementError(f"index {idx} is outside [0, {self.order})")
        return self.elements[idx]

    @cached_property
    def elements(self) -> Tuple[GroupElement, ...]:
        """All elements in index order."""
        coords = [()]
        for n_i in self.factors:
            coords = [c + (x,) for c in coords for x in range(n_i)]
        return tuple(coords)

    def add(self, g: Sequence[int], h: Sequence[int]) -> GroupElement:
        g, h = self.validate(g), self.validate(h)
        return tuple((a + b) % n_i for a, b, n_i in zip(g, h, self.factors))

    def neg(self, g: Sequence[int]) -> GroupElement:
        g = self.validate(g)
        return tuple((-a) % n_i for a, n_i in zip(g, self.factors))

    @cached_property
    def addition_table(self) -> Tuple[Tuple[int, ...], ...]:
        """addition_table[i][j] is the index of g_i + g_j."""
        elements = self.elements
        strides = self._strides
        factors = self.factors
        table = []
        for g in elements:
            table.append(tuple(
                sum(((a + b) % n_i) * stride for a, b, n_i, stride in zip(g, h, factors, strides))
                for h in elements
            ))
        return tuple(table)

    @cached_property
    def negation_table(self) -> Tuple[int, ...]:
        return tuple(self.encode(self.neg(g)) for g in self.elements)

    def add_index(self, i: ElementIndex, j: ElementIndex) -> ElementIndex:
        return self.addition_table[i][j]

    def neg_index(self, i: ElementIndex) -> ElementIndex:
        return self.negation_table[i]

    def format_element(self, g: Sequence[int]) -> str:
        if len(g) == 1:
            return str(g[0])
        return "(" + ",".join(str(c) for c in g) + ")"


@dataclass(frozen=True)
class GroupSubset:
    """Subset of a group stored as a bitset over canonical element indices."""
    group: GroupSpec
    bits: int = 0

    @classmethod
    def from_indices(cls, group: GroupSpec, indices) -> "GroupSubset":
        bits = 0
        for idx in indices:
            if not 0 <= idx < group.order:
                raise InvalidElementError(f"index {idx} is outside [0, {group.order})")
            bits |= 1 << idx
        return cls(group, bits)

    @classmethod
    def from_elements(cls, group: GroupSpec, elements) -> "GroupSubset":
        return cls.from_indices(group, (group.encode(g) for g in elements))

    @cached_property
    def size(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.size

    def __contains__(self, idx: ElementIndex) -> bool:
        return (self.bits >> idx) & 1 == 1

    def __iter__(self) -> Iterator[ElementIndex]:
        return iter(self.indices)

    @cached_property
    def indices(self) -> Tuple[ElementIndex, ...]:
        out = []
        bits = self.bits
        idx = 0
        while bits:
            if bits & 1:
                out.append(idx)
            bits >>= 1
            idx += 1
        return tuple(out)

    def elements(self) -> List[GroupElement]:
        return [self.group.elements[i] for i in self.indices]

    def negated(self) -> "GroupSubset":
        neg = self.group.negation_table
        return GroupSubset.from_indices(self.group, (neg[i] for i in self.indices))

    @property
    def is_symmetric(self) -> bool:
        return self.negated().bits == self.bits

    def isdisjoint(self, other: "GroupSubset") -> bool:
        return self.bits & other.bits == 0

    def format(self) -> str:
        return "{" + ", ".join(self.group.format_element(g) for g in self.elements()) + "}"


@dataclass(frozen=True)
class WalkMatrix:
    """Sparse 0-1 matrix M(H): row i has ones at the columns j with g_j - g_i in H."""
    group: GroupSpec
    source: GroupSubset
    rows: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.group.order

    def to_dense(self) -> List[List[int]]:
        dense = []
        for cols in self.rows:
            row = [0] * self.n
            for j in cols:
                row[j] = 1
            dense.append(row)
        return dense

    def row_sums(self) -> List[int]:
        return [len(cols) for cols in self.rows]

    def column_sums(self) -> List[int]:
        sums = [0] * self.n
        for cols in self.rows:
            for j in cols:
                sums[j] += 1
        return sums


class MateTag(Enum):
    FOUND = "Found"
    SINGULAR = "Singular"
    NON_BINARY = "NonBinary"
    WRONG_WEIGHT = "WrongWeight"


class Solver(Enum):
    DENSE = "dense"
    SPARSE = "sparse"


@dataclass
class MateResult:
    """Outcome of a mate computation."""
    tag: MateTag
    solver: Solver
    mate: Optional[GroupSubset] = None
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.tag is MateTag.FOUND


@dataclass(frozen=True)
class NearFactorization:
    """(A, B) with A + B covering every nonidentity element exactly lam times."""
    group: GroupSpec
    a: GroupSubset
    b: GroupSubset
    lam: int = 1

    @property
    def r(self) -> int:
        return self.a.size

    @property
    def s(self) -> int:
        return self.b.size

    def transposed(self) -> "NearFactorization":
        return NearFactorization(self.group, self.b, self.a, self.lam)


class SearchStrategy(Enum):
    PLAIN = "plain"
    ORBIT_REDUCED = "orbit-reduced"
    COSET_2X2 = "coset-2x2"


@dataclass(frozen=True)
class SearchCursor:
    """Resumable position in a candidate stream: the next candidate to emit."""
    profile_index: int = 0
    involution_rank: int = 0
    pair_rank: int = 0

    def to_dict(self) -> Dict[str, int]:
        return {
            "profile_index": self.profile_index,
            "involution_rank": self.involution_rank,
            "pair_rank": self.pair_rank,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, int]) -> "SearchCursor":
        return cls(
            profile_index=int(data.get("profile_index", 0)),
            involution_rank=int(data.get("involution_rank", 0)),
            pair_rank=int(data.get("pair_rank", 0)),
        )


@dataclass
class SearchTask:
    """One exhaustive search: find every (r, s, lam)-near-factorization of a group."""
    group: GroupSpec
    r: int
    s: int
    lam: int = 1
    strategy: SearchStrategy = SearchStrategy.PLAIN
    assume_symmetric: Optional[bool] = None
    checkpoint: Optional[SearchCursor] = None
    workers: int = 1
    time_budget: Optional[float] = None

    def __post_init__(self):
        if self.r < 1 or self.s < 1 or self.lam < 1:
            raise ParameterError(f"r, s and lambda must be positive, got r={self.r}, s={self.s}, lambda={self.lam}")
        if self.r * self.s != self.lam * (self.group.order - 1):
            raise ParameterError(
                f"r*s = {self.r * self.s} but lambda*(n-1) = {self.lam * (self.group.order - 1)} for {self.group.literal}"
            )
        if self.assume_symmetric is None:
            self.assume_symmetric = self.lam == 1

    @property
    def task_id(self) -> str:
        return f"{self.group.literal}_r{self.r}_s{self.s}_l{self.lam}_{self.strategy.value}"

    def to_dict(self) -> Dict[str, object]:
        return {
            "group": self.group.literal,
            "r": self.r,
            "s": self.s,
            "lambda": self.lam,
            "strategy": self.strategy.value,
            "assume_symmetric": self.assume_symmetric,
        }


@dataclass(frozen=True)
class InvolutionProfile:
    """A symmetric candidate holds i1 involutions and i2 symmetric pairs."""
    i1: int
    i2: int


@dataclass(frozen=True)
class OrbitCatalog:
    """Orbit representatives of i1-subsets of involutions under an automorphism group."""
    context: str
    subset_size: int
    automorphism_count: int
    representatives: Tuple[Tuple[GroupElement, ...], ...]
    orbit_sizes: Tuple[int, ...]


@dataclass(frozen=True)
class CosetDistribution:
    """Cell counts a[i,j] = |A ∩ Z_t×{i}×{j}| and b[i,j] for a Z_t×(Z_2)^2 split."""
    a: Tuple[Tuple[Cell, int], ...]
    b: Tuple[Tuple[Cell, int], ...]
    exceptional: Cell
    swapped: bool = False

    def a_count(self, cell: Cell) -> int:
        return dict(self.a)[cell]

    def b_count(self, cell: Cell) -> int:
        return dict(self.b)[cell]

    @property
    def involution_cells_a(self) -> Tuple[Cell, ...]:
        return tuple(cell for cell, count in self.a if count % 2 == 1)

    @property
    def involution_cells_b(self) -> Tuple[Cell, ...]:
        return tuple(cell for cell, count in self.b if count % 2 == 1)


class CriterionId(Enum):
    SMALL_A = "SmallA"
    THREE_P_PLUS_ONE = "ThreePPlusOne"
    EXPONENT_QUOTIENT = "ExponentQuotient"
    SPECIAL_FORM = "SpecialForm"
    QUOTIENT_CONGRUENCE = "QuotientCongruence"
    PECHER = "Pecher"


class Outcome(Enum):
    RULED_OUT = "RuledOut"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CriterionVerdict:
    criterion: CriterionId
    outcome: Outcome
    details: str = ""
    witness: Tuple[Tuple[str, object], ...] = ()

    @property
    def ruled_out(self) -> bool:
        return self.outcome is Outcome.RULED_OUT

    def witness_dict(self) -> Dict[str, object]:
        return dict(self.witness)


@dataclass
class SearchReport:
    """Transcript of an exhaustive search."""
    task: SearchTask
    filter_verdicts: List[CriterionVerdict] = field(default_factory=list)
    candidates_tested: int = 0
    found: List[NearFactorization] = field(default_factory=list)
    exhaustive: bool = False
    wall_time: float = 0.0
    checkpoint: Optional[SearchCursor] = None
    warnings: List[str] = field(default_factory=list)

    @property
    def ruled_out(self) -> bool:
        return any(v.ruled_out for v in self.filter_verdicts)

    def absorb(self, candidates: int, found: List[NearFactorization]) -> None:
        self.candidates_tested += candidates
        self.found.extend(found)


@dataclass(frozen=True)
class DifferenceFamily:
    """Ordered family A_0..A_{m-1} of subsets used for circular external differences."""
    group: GroupSpec
    sets: Tuple[GroupSubset, ...]
    lam: int = 1

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def ell(self) -> int:
        return self.sets[0].size if self.sets else 0


@dataclass
class ScedfCheck:
    """Detailed SCEDF verdict: disjointness, per-pair histograms, failing pairs."""
    is_scedf: bool
    disjoint: bool
    uniform_size: bool
    histograms: List[Dict[int, int]] = field(default_factory=list)
    failing_pairs: List[int] = field(default_factory=list)


@dataclass
class CampaignConfig:
    """Batch of searches over groups, lambdas and splits."""
    orders: List[int] = field(default_factory=list)
    groups: List[str] = field(default_factory=list)
    lambdas: List[int] = field(default_factory=lambda: [1])
    strategy_overrides: Dict[str, str] = field(default_factory=dict)
    workers: int = 1
    time_budget: float = 600.0
    catalog_path: str = "results/catalog.jsonl"
    checkpoint_dir: str = "results/checkpoints"
    report_path: str = "results/report.csv"
    noncyclic_only: bool = True
    r_values: Optional[List[int]] = None

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "CampaignConfig":
        known = {name for name in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown campaign config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class CatalogRecord:
    """One found near-factorization as persisted in the JSON-lines catalog."""
    group: str
    r: int
    s: int
    lam: int
    a: List[List[int]]
    b: List[List[int]]
    strategy: str
    algorithm: str
    timestamp: str
    elapsed_ms: float
    v: int = 1

    def to_dict(self) -> Dict[str, object]:
        return {
            "v": self.v,
            "group": self.group,
            "r": self.r,
            "s": self.s,
            "lambda": self.lam,
            "A": self.a,
            "B": self.b,
            "strategy": self.strategy,
            "algorithm": self.algorithm,
            "timestamp": self.timestamp,
            "elapsed_ms": self.elapsed_ms,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "CatalogRecord":
        return cls(
            group=data["group"],
            r=int(data["r"]),
            s=int(data["s"]),
            lam=int(data["lambda"]),
            a=[list(g) for g in data["A"]],
            b=[list(g) for g in data["B"]],
            strategy=data["strategy"],
            algorithm=data["algorithm"],
            timestamp=data["timestamp"],
            elapsed_ms=float(data["elapsed_ms"]),
            v=int(data.get("v", 1)),
        )


@dataclass
class CampaignRow:
    """One line of a campaign report."""
    group: str
    r: int
    s: int
    lam: int
    outcome: str
    method: str
    found: int = 0
    candidates_tested: int = 0
    elapsed_ms: float = 0.0

    def key(self) -> Tuple[str, int, int, int, str, str, int, int]:
        return (self.group, self.r, self.s, self.lam, self.outcome, self.method, self.found, self.candidates_tested)


@dataclass
class BenchRecord:
    group: str
    subset: List[List[int]]
    repetitions: int
    dense_ms: float
    sparse_ms: float
    dense_tag: str
    sparse_tag: str
    identical: bool

    @property
    def ratio(self) -> float:
        return self.dense_ms / self.sparse_ms if self.sparse_ms > 0 else float("inf")

    def to_dict(self) -> Dict[str, object]:
        return {
            "group": self.group,
            "A": self.subset,
            "repetitions": self.repetitions,
            "dense_ms": round(self.dense_ms, 3),
            "sparse_ms": round(self.sparse_ms, 3),
            "ratio": round(self.ratio, 3),
            "dense_tag": self.dense_tag,
            "sparse_tag": self.sparse_tag,
            "identical": self.identical,
        }


@dataclass(frozen=True)
class Table3Verdict:
    label: str
    r: int
    s: int
    passed: bool
