"""
Search service: exhaustive, checkpointable searches for near-factorizations.
"""

import logging
import multiprocessing as mp
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from math import comb, gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.application.algebra import combinations_from, unrank_combination
from src.application.services.criteria_service import CriteriaService
from src.application.services.group_service import GroupService, group_from_factors
from src.application.services.mate_service import MateService
from src.application.services.orbit_service import OrbitService
from src.domain.entities import (
    Cell,
    CosetDistribution,
    GroupSpec,
    GroupSubset,
    InvolutionProfile,
    NearFactorization,
    OrbitCatalog,
    SearchCursor,
    SearchReport,
    SearchStrategy,
    SearchTask,
)
from src.domain.exceptions import ConsistencyError, ParameterError
from src.domain.repositories import CheckpointRepository

logger = logging.getLogger(__name__)

CHUNK_SIZE = 64
CELLS: Tuple[Cell, ...] = ((0, 0), (0, 1), (1, 0), (1, 1))

Candidate = Tuple[SearchCursor, int]


def evaluate_chunk(factors: Tuple[int, ...], lam: int, candidates: Sequence[int]) -> Tuple[int, List[Tuple[int, int]]]:
    """Run the sparse mate solver on each candidate bitset; return (tested, [(candidate, mate)])."""
    group = group_from_factors(tuple(factors))
    mate_service = MateService()
    found = []
    for bits in candidates:
        result = mate_service.compute_mate_sparse(group, GroupSubset(group, bits), lam)
        if result.found:
            found.append((bits, result.mate.bits))
    return len(candidates), found


def _chunks(stream: Iterator[Candidate], size: int) -> Iterator[Tuple[SearchCursor, List[int]]]:
    chunk: List[int] = []
    start = None
    for cursor, bits in stream:
        if not chunk:
            start = cursor
        chunk.append(bits)
        if len(chunk) == size:
            yield start, chunk
            chunk = []
    if chunk:
        yield start, chunk


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class SearchService:
    """Service enumerating candidate sets and testing each for a mate."""

    def __init__(
        self,
        group_service: GroupService,
        mate_service: MateService,
        orbit_service: OrbitService,
        criteria_service: CriteriaService,
        checkpoint_repository: Optional[CheckpointRepository] = None,
    ):
        self.group_service = group_service
        self.mate_service = mate_service
        self.orbit_service = orbit_service
        self.criteria_service = criteria_service
        self.checkpoint_repository = checkpoint_repository

    # Symmetric enumeration

    def involution_profiles(self, group: GroupSpec, r: int) -> List[InvolutionProfile]:
        """Feasible (i1, i2) splits of r, by increasing i1."""
        t1 = self.group_service.involution_count(group)
        t2 = (group.order - t1) // 2
        return [
            InvolutionProfile(i1=i1, i2=(r - i1) // 2)
            for i1 in range(0, min(t1, r) + 1)
            if (r - i1) % 2 == 0 and (r - i1) // 2 <= t2
        ]

    def count_symmetric_candidates(self, group: GroupSpec, r: int) -> int:
        t1 = self.group_service.involution_count(group)
        t2 = (group.order - t1) // 2
        return sum(comb(t1, p.i1) * comb(t2, p.i2) for p in self.involution_profiles(group, r))

    def enumerate_symmetric_subsets(
        self,
        group: GroupSpec,
        r: int,
        profile: InvolutionProfile,
        catalog: Optional[OrbitCatalog] = None,
        start: Tuple[int, int] = (0, 0),
    ) -> Iterator[Tuple[int, int, GroupSubset]]:
        """Yield (involution_rank, pair_rank, A) for every symmetric A of size r with this profile.

        With a catalog only one involution subset per orbit is used. The
        stream starts at the given (involution_rank, pair_rank).
        """
        involutions = self.group_service.involutions(group).indices
        pairs = self.group_service.symmetric_pairs(group)
        t1, t2 = len(involutions), len(pairs)
        if profile.i1 + 2 * profile.i2 != r or not 0 <= profile.i1 <= t1 or not 0 <= profile.i2 <= t2:
            return

        pair_bits = [(1 << x) | (1 << y) for x, y in pairs]
        inv_start, pair_start = start
        if catalog is not None:
            reps = self.orbit_service.catalog_indices(group, catalog)
            choices = ((rank, reps[rank]) for rank in range(inv_start, len(reps)))
        else:
            choices = (
                (inv_start + offset, tuple(involutions[k] for k in combo))
                for offset, combo in enumerate(combinations_from(t1, profile.i1, inv_start))
            )

        first = True
        for inv_rank, chosen in choices:
            inv_bits = 0
            for idx in chosen:
                inv_bits |= 1 << idx
            offset = pair_start if first else 0
            first = False
            for k, combo in enumerate(combinations_from(t2, profile.i2, offset)):
                bits = inv_bits
                for c in combo:
                    bits |= pair_bits[c]
                yield inv_rank, offset + k, GroupSubset(group, bits)

    def _symmetric_stream(self, group: GroupSpec, r: int, use_catalog: bool,
                          cursor: SearchCursor, report: SearchReport) -> Iterator[Candidate]:
        profiles = self.involution_profiles(group, r)
        warned = False
        for p_idx in range(cursor.profile_index, len(profiles)):
            profile = profiles[p_idx]
            catalog = None
            if use_catalog:
                catalog = self.orbit_service.involution_catalog(group, profile.i1)
                if catalog is None and not warned:
                    message = f"No orbit catalog for {group.literal}; enumerating involution subsets in full"
                    logger.warning(message)
                    report.warnings.append(message)
                    warned = True
            start = (cursor.involution_rank, cursor.pair_rank) if p_idx == cursor.profile_index else (0, 0)
            logger.debug(f"Profile {p_idx}: i1={profile.i1}, i2={profile.i2}, catalog={catalog.context if catalog else None}")
            for inv_rank, pair_rank, subset in self.enumerate_symmetric_subsets(group, r, profile, catalog, start):
                yield SearchCursor(p_idx, inv_rank, pair_rank), subset.bits

    def _translation_normalised_stream(self, group: GroupSpec, r: int, cursor: SearchCursor) -> Iterator[Candidate]:
        """Every r-subset containing the identity."""
        if cursor.profile_index > 0:
            return
        for k, combo in enumerate(combinations_from(group.order - 1, r - 1, cursor.pair_rank)):
            bits = 1
            for c in combo:
                bits |= 1 << (c + 1)
            yield SearchCursor(0, 0, cursor.pair_rank + k), bits

    # Coset-distribution search for Z_t x (Z_2)^2

    def _coset_shape(self, group: GroupSpec) -> int:
        factors = group.factors
        if len(factors) != 3 or factors[1:] != (2, 2) or factors[0] % 2 == 0:
            raise ParameterError(f"coset-2x2 needs a group Z_t x Z2 x Z2 with t odd, got {group.literal}")
        return factors[0]

    def admissible_coset_distributions(self, group: GroupSpec, r: int, s: int) -> List[CosetDistribution]:
        """All cell counts (a, b) solving the coset equations, with r = 1 mod 4 on the a-side."""
        t = self._coset_shape(group)
        if r * s != group.order - 1:
            raise ParameterError(f"r*s = {r * s} but n-1 = {group.order - 1}")
        swapped = r % 4 == 3
        if swapped:
            r, s = s, r

        def cell_sum(a, b, target: Cell) -> int:
            return sum(a[c1] * b[c2] for c1 in range(4) for c2 in range(4)
                       if ((CELLS[c1][0] + CELLS[c2][0]) % 2, (CELLS[c1][1] + CELLS[c2][1]) % 2) == target)

        targets = [t - 1, t, t, t]
        solutions = []
        b_options = [b for b in _compositions(s, 4) if max(b) <= t]
        for a in _compositions(r, 4):
            if max(a) > t:
                continue
            for b in b_options:
                if any(a[i] % 2 == 1 and b[i] % 2 == 1 for i in range(4)):
                    continue
                if all(cell_sum(a, b, cell) == targets[k] for k, cell in enumerate(CELLS)):
                    solutions.append((a, b))

        distributions = []
        for a, b in solutions:
            exceptional = max(range(4), key=lambda i: (a[i] - (r - 1) // 4, -i))
            distributions.append(CosetDistribution(
                a=tuple(zip(CELLS, a)),
                b=tuple(zip(CELLS, b)),
                exceptional=CELLS[exceptional],
                swapped=swapped,
            ))
        logger.debug(f"{len(distributions)} coset distributions for {group.literal} ({r},{s})")
        return distributions

    def reduce_coset_distributions(self, distributions: List[CosetDistribution]) -> List[CosetDistribution]:
        """Keep one distribution per GL(2,2)-orbit of the exceptional cell."""
        catalog = self.orbit_service.gl_orbit_catalog(2, 1)
        representatives = {rep[0] for rep in catalog.representatives}
        return [d for d in distributions if d.exceptional in representatives]

    def _coset_stream(self, group: GroupSpec, cases: List[CosetDistribution], use_b_side: bool,
                      cursor: SearchCursor) -> Iterator[Candidate]:
        t = group.factors[0]
        half = (t - 1) // 2
        orbit_reps = set(self.orbit_service.unit_pair_representatives(t))
        for case_index in range(cursor.profile_index, len(cases)):
            case = cases[case_index]
            counts = case.b if use_b_side else case.a
            cells = []
            for (i, j), count in counts:
                inv_bits = 1 << group.encode((0, i, j)) if count % 2 else 0
                pair_bits = [
                    (1 << group.encode((x, i, j))) | (1 << group.encode((t - x, i, j)))
                    for x in range(1, half + 1)
                ]
                cells.append((inv_bits, pair_bits, count // 2))
            normalised = next((k for k, cell in enumerate(cells) if cell[2] > 0), None)
            sizes = [comb(half, c[2]) for c in cells]
            total = 1
            for size in sizes:
                total *= size
            start = cursor.pair_rank if case_index == cursor.profile_index else 0
            for rank in range(start, total):
                digits = []
                rest = rank
                for size in reversed(sizes):
                    digits.append(rest % size)
                    rest //= size
                digits.reverse()
                bits = 0
                keep = True
                for k, ((inv_bits, pair_bits, pair_count), digit) in enumerate(zip(cells, digits)):
                    combo = unrank_combination(digit, half, pair_count)
                    if k == normalised and not any(c + 1 in orbit_reps for c in combo):
                        keep = False
                        break
                    bits |= inv_bits
                    for c in combo:
                        bits |= pair_bits[c]
                if keep:
                    yield SearchCursor(case_index, 0, rank), bits

    def coset_structured_search(self, task: SearchTask, report: Optional[SearchReport] = None) -> SearchReport:
        """Enumerate the smaller side cell by cell from the admissible coset distributions."""
        if task.strategy is not SearchStrategy.COSET_2X2:
            raise ParameterError(f"coset_structured_search needs strategy coset-2x2, got {task.strategy.value}")
        if task.lam != 1:
            raise ParameterError("coset-2x2 search is defined for lambda = 1 only")
        self._coset_shape(task.group)
        if report is None:
            report = SearchReport(task=task)
        started = time.monotonic()
        cases = self.reduce_coset_distributions(
            self.admissible_coset_distributions(task.group, task.r, task.s)
        )
        a_size = task.s if task.r % 4 == 3 else task.r
        b_size = (task.group.order - 1) // a_size
        use_b_side = b_size < a_size
        logger.info(
            f"Coset search on {task.group.literal}: {len(cases)} cases, enumerating the "
            f"{'b' if use_b_side else 'a'}-side ({min(a_size, b_size)} elements)"
        )
        cursor = task.checkpoint or SearchCursor()
        stream = self._coset_stream(task.group, cases, use_b_side, cursor)
        self._run(task, stream, report, started)
        return report

    # Driver

    def search(self, task: SearchTask) -> SearchReport:
        """Apply the filters, then stream candidates through the sparse mate solver."""
        started = time.monotonic()
        report = SearchReport(task=task)
        report.filter_verdicts = self.criteria_service.evaluate_all(task.group, task.r, task.s, task.lam)
        if report.ruled_out:
            fired = "+".join(v.criterion.value for v in report.filter_verdicts if v.ruled_out)
            logger.info(f"{task.task_id} ruled out by {fired}; no search needed")
            report.wall_time = time.monotonic() - started
            return report

        if task.lam > 1 and task.assume_symmetric:
            message = f"Symmetric candidates with lambda = {task.lam} may miss near-factorizations"
            logger.warning(message)
            report.warnings.append(message)

        if task.strategy is SearchStrategy.COSET_2X2:
            return self.coset_structured_search(task, report)

        if task.strategy is SearchStrategy.ORBIT_REDUCED and not task.assume_symmetric:
            message = f"Orbit reduction applies to symmetric candidates only; {task.task_id} runs unreduced"
            logger.warning(message)
            report.warnings.append(message)

        smaller = min(task.r, task.s)
        cursor = task.checkpoint or SearchCursor()
        if task.assume_symmetric:
            stream = self._symmetric_stream(
                task.group, smaller, task.strategy is SearchStrategy.ORBIT_REDUCED, cursor, report
            )
        else:
            stream = self._translation_normalised_stream(task.group, smaller, cursor)
        logger.info(f"Searching {task.task_id} over {smaller}-subsets")
        self._run(task, stream, report, started)
        return report

    def _orient(self, task: SearchTask, candidate_bits: int, mate_bits: int) -> NearFactorization:
        a = GroupSubset(task.group, candidate_bits)
        b = GroupSubset(task.group, mate_bits)
        if a.size != task.r:
            a, b = b, a
        return NearFactorization(group=task.group, a=a, b=b, lam=task.lam)

    def _absorb(self, task: SearchTask, report: SearchReport, result: Tuple[int, List[Tuple[int, int]]]) -> None:
        tested, pairs = result
        found = [self._orient(task, c, m) for c, m in pairs]
        for nf in found:
            if not self.mate_service.verify(nf.group, nf.a, nf.b, nf.lam):
                raise ConsistencyError(f"found pair {nf.a.format()} / {nf.b.format()} does not verify")
        report.absorb(tested, found)

    def _run(self, task: SearchTask, stream: Iterator[Candidate], report: SearchReport, started: float) -> None:
        deadline = started + task.time_budget if task.time_budget else None
        factors = task.group.factors
        checkpoint = None
        executor = None
        if task.workers > 1:
            try:
                executor = ProcessPoolExecutor(max_workers=task.workers, mp_context=mp.get_context("spawn"))
            except (NotImplementedError, PermissionError, OSError) as e:
                logger.warning(f"Parallel workers unavailable, falling back to serial: {e}")
                executor = None

        try:
            if executor is None:
                for start, chunk in _chunks(stream, CHUNK_SIZE):
                    if deadline is not None and time.monotonic() > deadline:
                        checkpoint = start
                        break
                    self._absorb(task, report, evaluate_chunk(factors, task.lam, chunk))
            else:
                in_flight = deque()
                for start, chunk in _chunks(stream, CHUNK_SIZE):
                    if deadline is not None and time.monotonic() > deadline:
                        checkpoint = start
                        break
                    in_flight.append(executor.submit(evaluate_chunk, factors, task.lam, chunk))
                    if len(in_flight) >= 2 * task.workers:
                        self._absorb(task, report, in_flight.popleft().result())
                while in_flight:
                    self._absorb(task, report, in_flight.popleft().result())
        finally:
            if executor is not None:
                executor.shutdown()

        report.exhaustive = checkpoint is None
        report.checkpoint = checkpoint
        report.wall_time = time.monotonic() - started
        if checkpoint is not None:
            logger.warning(f"Time budget of {task.time_budget}s exhausted for {task.task_id} at {checkpoint}")
            if self.checkpoint_repository is not None:
                self.checkpoint_repository.save(task, checkpoint)
        elif self.checkpoint_repository is not None:
            self.checkpoint_repository.clear(task.task_id)
        logger.info(
            f"{task.task_id}: {report.candidates_tested} candidates, {len(report.found)} found, "
            f"exhaustive={report.exhaustive}, {report.wall_time:.2f}s"
        )

    # Deduplication

    def _scaling_permutations(self, group: GroupSpec) -> Iterator[Tuple[int, ...]]:
        unit_lists = [[u for u in range(1, n_i) if gcd(u, n_i) == 1] or [1] for n_i in group.factors]
        for units in product(*unit_lists):
            yield tuple(
                group.encode(tuple(u * c % n_i for u, c, n_i in zip(units, g, group.factors)))
                for g in group.elements
            )

    def canonical_key(self, nf: NearFactorization) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Smallest (A, B) index listing over unit scalings, translations and, when r = s, the swap."""
        group = nf.group
        table = group.addition_table
        neg = group.negation_table
        orientations = [(nf.a.indices, nf.b.indices)]
        if nf.r == nf.s:
            orientations.append((nf.b.indices, nf.a.indices))
        best = None
        for perm in self._scaling_permutations(group):
            for a_idx, b_idx in orientations:
                a_img = [perm[i] for i in a_idx]
                b_img = [perm[i] for i in b_idx]
                for g in range(group.order):
                    row_plus, row_minus = table[g], table[neg[g]]
                    key = (tuple(sorted(row_plus[i] for i in a_img)), tuple(sorted(row_minus[i] for i in b_img)))
                    if best is None or key < best:
                        best = key
        return best

    def deduplicate_found(self, found: Sequence[NearFactorization]) -> List[NearFactorization]:
        """One near-factorization per equivalence class, in order of first appearance."""
        seen: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], NearFactorization] = {}
        for nf in found:
            key = self.canonical_key(nf)
            if key not in seen:
                seen[key] = nf
        return list(seen.values())
