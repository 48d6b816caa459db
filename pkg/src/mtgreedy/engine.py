"""Forward-backward greedy fitting over two object classes.

The engine grows a support pattern of singleton cells and whole shared rows,
always keeping the estimate at the restricted least-squares optimum of the
current pattern.  Forward steps add the object with the largest weighted loss
decrease (row gains are divided by the sharing weight w, so a row must beat
the best singleton by that factor).  After every addition, backward steps
remove objects whose weighted cost is at most nu times the most recently
recorded reward, popping that reward off a ledger so that every removal is
matched one-to-one with a prior addition.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import solve_least_squares
from .model import (
    FitReport,
    GreedyConfig,
    RewardLedger,
    StepRecord,
    SupportPattern,
    loss,
    residuals as compute_residuals,
)


@dataclass(frozen=True)
class ForwardCandidate:
    kind: str          # "singleton" | "row"
    index: tuple       # (i, j) or (m,)
    weighted_reward: float


@dataclass(frozen=True)
class BackwardCandidate:
    kind: str
    index: tuple
    weighted_cost: float


def singleton_gain(problem, beta, residuals, i, j):
    """Best loss decrease from adjusting entry (i, j) alone, with its optimizer.

    Closed form for the one-dimensional quadratic: with x the i-th design
    column of task j and r its current residual, the optimal increment is
    gamma* = (x.r)/||x||^2 and the decrease is (x.r)^2 / (2 n ||x||^2).
    Zero columns yield (0, 0).
    """
    t = problem.tasks[j]
    x = t.X[:, i]
    xsq = float(x @ x)
    if xsq == 0.0:
        return 0.0, 0.0
    xr = float(x @ residuals[j])
    gain = xr * xr / (2.0 * t.n * xsq)
    return gain, xr / xsq


def row_gain(problem, beta, residuals, m, w):
    """Weighted gain of adjusting the whole feature row m, plus per-task optimizers.

    The loss separates over tasks, so the row subproblem solves one
    single-entry problem per task; the summed decrease is divided by w.
    """
    total = 0.0
    alpha = np.zeros(problem.r)
    for j in range(problem.r):
        g, gamma = singleton_gain(problem, beta, residuals, m, j)
        total += g
        alpha[j] = gamma
    return total / w, alpha


def singleton_cost(problem, beta, i, j, residuals=None, pattern=None):
    """Exact loss increase from zeroing entry (i, j) of the current estimate.

    When a pattern is supplied, (i, j) must be one of its singleton cells.
    """
    if pattern is not None and (i, j) not in pattern.singletons:
        raise ValueError(f"({i}, {j}) is not a supported singleton")
    b = float(beta[i, j])
    t = problem.tasks[j]
    x = t.X[:, i]
    r = residuals[j] if residuals is not None else t.y - t.X @ beta[:, j]
    # ||r + b x||^2 - ||r||^2 expanded; exact for a single-entry change.
    return (b * b * float(x @ x) + 2.0 * b * float(x @ r)) / (2.0 * t.n)


def row_cost(problem, beta, m, w, residuals=None, pattern=None):
    """Weighted loss increase from zeroing the whole feature row m.

    When a pattern is supplied, m must be one of its shared rows.
    """
    if pattern is not None and m not in pattern.rows:
        raise ValueError(f"feature {m} is not a supported row")
    total = 0.0
    for j in range(problem.r):
        total += singleton_cost(problem, beta, m, j, residuals)
    return total / w


def refit(problem, pattern):
    """Restricted least-squares re-estimate on a support pattern.

    Each task is solved independently on its supported columns; entries off
    the pattern are exact zeros.  Rank-deficient supports take the
    minimum-norm solution.
    """
    beta = np.zeros((problem.p, problem.r))
    for j, t in enumerate(problem.tasks):
        cols = sorted(pattern.task_support(j))
        if cols:
            beta[cols, j] = solve_least_squares(t.X[:, cols], t.y)
    return beta


def _pattern(singles, rows):
    return SupportPattern(singletons=frozenset(singles), rows=frozenset(rows))


def _gain_matrix(problem, residuals, colsq):
    """All singleton gains as a (p, r) array; zero columns score zero."""
    gains = np.zeros((problem.p, problem.r))
    for j, t in enumerate(problem.tasks):
        c = t.X.T @ residuals[j]
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(colsq[j] > 0.0, c * c / (2.0 * t.n * colsq[j]), 0.0)
        gains[:, j] = g
    return gains


def _best_forward(problem, singles, rows, config, gains):
    """Pick the best admissible candidate; None when the support is saturated.

    Singleton candidates exclude supported cells and features already held as
    rows; row candidates exclude current rows.  The row is chosen on ties.
    """
    masked = gains.copy()
    for (i, j) in singles:
        masked[i, j] = -1.0
    row_list = sorted(rows)
    if row_list:
        masked[row_list, :] = -1.0

    flat = int(np.argmax(masked))
    i, j = divmod(flat, problem.r)
    best_single = masked[i, j]

    best_row = -1.0
    best_m = -1
    if config.rows_enabled:
        row_sums = gains.sum(axis=1)
        if row_list:
            row_sums[row_list] = -1.0
        best_m = int(np.argmax(row_sums))
        if row_sums[best_m] >= 0.0:
            best_row = row_sums[best_m] / config.w

    if best_single < 0.0 and best_row < 0.0:
        return None
    if best_row >= best_single:
        return ForwardCandidate("row", (best_m,), float(best_row))
    return ForwardCandidate("singleton", (i, j), float(best_single))


def best_forward(problem, beta, pattern, config, residuals=None):
    """Best admissible forward candidate at the given state (None if saturated)."""
    if residuals is None:
        residuals = compute_residuals(problem, beta)
    colsq = [np.einsum("ij,ij->j", t.X, t.X) for t in problem.tasks]
    gains = _gain_matrix(problem, residuals, colsq)
    return _best_forward(problem, set(pattern.singletons), set(pattern.rows), config, gains)


def _worst_backward(problem, beta, singles, rows, config, residuals):
    """Cheapest removal across both classes; rows are removed on ties."""
    best_s = None
    for (i, j) in sorted(singles):
        c = singleton_cost(problem, beta, i, j, residuals)
        if best_s is None or c < best_s.weighted_cost:
            best_s = BackwardCandidate("singleton", (i, j), c)
    best_r = None
    for m in sorted(rows):
        c = row_cost(problem, beta, m, config.w, residuals)
        if best_r is None or c < best_r.weighted_cost:
            best_r = BackwardCandidate("row", (m,), c)
    if best_r is not None and (best_s is None or best_r.weighted_cost <= best_s.weighted_cost):
        return best_r
    return best_s


def coalesce_threshold(w):
    """Singleton count at which a feature row out-earns the w-weighted row gate."""
    return math.floor(w) + 1


def fit(problem, config):
    """Run the full greedy procedure and return a FitReport with its trace.

    Forward steps stop once the best weighted gain falls to the stopping
    threshold (within the comparison tolerance) or the step cap is hit.
    When row coalescing is on, a feature accumulating floor(w) + 1 singletons
    is reclassified as a shared row, mirroring how true supports are
    partitioned by per-row entry counts.
    """
    if not isinstance(config, GreedyConfig):
        raise TypeError("config must be a GreedyConfig")
    if config.rows_enabled and problem.r > 1 and config.w > problem.r:
        raise ValueError(f"w={config.w} exceeds the task count r={problem.r}")

    p, r = problem.p, problem.r
    singles: set = set()
    rows: set = set()
    beta = np.zeros((p, r))
    res = [t.y.astype(float).copy() for t in problem.tasks]
    colsq = [np.einsum("ij,ij->j", t.X, t.X) for t in problem.tasks]
    ledger = RewardLedger()
    steps: list = []
    cap = config.step_cap(p, r)
    forward_taken = 0
    termination = "gain-below-threshold"
    d = coalesce_threshold(config.w)

    while True:
        if forward_taken >= cap:
            termination = "max-steps"
            break
        gains = _gain_matrix(problem, res, colsq)
        cand = _best_forward(problem, singles, rows, config, gains)
        if cand is None or cand.weighted_reward <= config.epsilon + config.comparison_tolerance:
            termination = "gain-below-threshold"
            break

        forward_taken += 1
        promoted = None
        if cand.kind == "row":
            m = cand.index[0]
            singles -= {(i, j) for (i, j) in singles if i == m}
            rows.add(m)
        else:
            i, j = cand.index
            singles.add((i, j))
            if config.coalesce_rows and config.rows_enabled:
                held = [(ii, jj) for (ii, jj) in singles if ii == i]
                if len(held) >= d:
                    singles -= set(held)
                    rows.add(i)
                    promoted = i
        ledger.push(cand.weighted_reward, cand.kind, len(steps))
        beta = refit(problem, _pattern(singles, rows))
        res = compute_residuals(problem, beta)
        steps.append(StepRecord(
            kind="forward",
            object_kind=cand.kind,
            index=cand.index,
            reward_or_cost=cand.weighted_reward,
            loss_after=loss(problem, beta),
            ledger_depth=len(ledger),
            promoted_row=promoted,
        ))

        # Backward passes: keep removing while the cheapest removal costs at
        # most nu times the most recent recorded reward.
        while singles or rows:
            if len(ledger) == 0:
                break
            back = _worst_backward(problem, beta, singles, rows, config, res)
            top_reward, _, top_step = ledger.top
            if back.weighted_cost > config.nu * top_reward:
                break
            ledger.pop()
            if back.kind == "row":
                rows.discard(back.index[0])
            else:
                singles.discard((back.index[0], back.index[1]))
            beta = refit(problem, _pattern(singles, rows))
            res = compute_residuals(problem, beta)
            steps.append(StepRecord(
                kind="backward",
                object_kind=back.kind,
                index=back.index,
                reward_or_cost=back.weighted_cost,
                loss_after=loss(problem, beta),
                ledger_depth=len(ledger),
                popped_reward=top_reward,
                popped_step=top_step,
            ))

    return FitReport(
        coefficients=beta,
        pattern=_pattern(singles, rows),
        final_loss=loss(problem, beta),
        steps=tuple(steps),
        termination=termination,
    )


def check_step_records(report, config, initial_loss):
    """Cheap trace invariants computed from recorded values only.

    Checks, for every step: rewards cleared the stopping gate; each removal
    cost at most nu times the reward it popped; each matched add/remove pair
    strictly decreased the loss; and the final pattern keeps fewer than
    floor(w) + 1 singletons on any non-shared feature row when rows are in
    play with a non-integer weight.  Raises AssertionError on violation.
    """
    loss_before = [initial_loss]
    for s in report.steps:
        loss_before.append(s.loss_after)
    stack = []
    for idx, s in enumerate(report.steps):
        if s.kind == "forward":
            assert s.reward_or_cost > config.epsilon, (
                f"step {idx}: recorded reward {s.reward_or_cost} under threshold")
            stack.append(idx)
        else:
            assert s.reward_or_cost >= -1e-10, f"step {idx}: negative removal cost"
            assert stack, f"step {idx}: removal with empty ledger"
            fidx = stack.pop()
            forward = report.steps[fidx]
            assert s.popped_reward == forward.reward_or_cost, (
                f"step {idx}: popped reward mismatch with step {fidx}")
            assert s.reward_or_cost <= config.nu * s.popped_reward, (
                f"step {idx}: cost {s.reward_or_cost} exceeds "
                f"nu * {s.popped_reward}")
            drop = loss_before[fidx] - forward.loss_after
            rise = s.loss_after - loss_before[idx]
            assert drop - rise > 0.0, (
                f"steps {fidx}/{idx}: paired add/remove did not decrease the loss")
    if config.rows_enabled and config.coalesce_rows and config.w != math.floor(config.w):
        d = coalesce_threshold(config.w)
        counts: dict = {}
        for (i, _) in report.pattern.singletons:
            counts[i] = counts.get(i, 0) + 1
        worst = max(counts.values(), default=0)
        assert worst <= d - 1, (
            f"a non-shared row holds {worst} singletons; limit is {d - 1}")


def verify_trace(problem, config, report, grad_tol=1e-8, loss_tol=1e-10):
    """Replay a fit trace and verify the engine's state invariants.

    On top of ``check_step_records`` this re-applies every move, refits, and
    asserts that recorded losses match to loss_tol, that the loss gradient
    vanishes on the support after every refit (|grad| <= grad_tol), and that
    the replayed final pattern and coefficients agree with the report.
    """
    check_step_records(report, config, loss(problem, np.zeros((problem.p, problem.r))))
    singles: set = set()
    rows: set = set()
    d = coalesce_threshold(config.w)
    for idx, s in enumerate(report.steps):
        if s.kind == "forward":
            if s.object_kind == "row":
                m = s.index[0]
                singles -= {(i, j) for (i, j) in singles if i == m}
                rows.add(m)
            else:
                i, j = s.index
                singles.add((i, j))
                if s.promoted_row is not None:
                    held = [(ii, jj) for (ii, jj) in singles if ii == i]
                    assert s.promoted_row == i and len(held) >= d, (
                        f"step {idx}: promotion recorded without {d} singletons")
                    singles -= set(held)
                    rows.add(i)
        else:
            if s.object_kind == "row":
                assert s.index[0] in rows, f"step {idx}: removing absent row"
                rows.discard(s.index[0])
            else:
                assert (s.index[0], s.index[1]) in singles, (
                    f"step {idx}: removing absent singleton")
                singles.discard((s.index[0], s.index[1]))
        beta = refit(problem, _pattern(singles, rows))
        step_loss = loss(problem, beta)
        assert abs(step_loss - s.loss_after) <= loss_tol * (1.0 + abs(step_loss)), (
            f"step {idx}: replayed loss {step_loss} vs recorded {s.loss_after}")
        res = compute_residuals(problem, beta)
        for j, t in enumerate(problem.tasks):
            grad = -(t.X.T @ res[j]) / t.n
            for i in _pattern(singles, rows).task_support(j):
                assert abs(grad[i]) <= grad_tol, (
                    f"step {idx}: gradient {grad[i]} on supported ({i},{j})")
    assert _pattern(singles, rows) == report.pattern, "replayed pattern differs"
    beta = refit(problem, report.pattern)
    assert np.allclose(beta, report.coefficients, atol=1e-12, rtol=0.0), (
        "replayed coefficients differ")
    assert abs(loss(problem, beta) - report.final_loss) <= loss_tol * (1.0 + report.final_loss)
