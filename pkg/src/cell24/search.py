"""Census search: enumerate side-pairings of the 24-cell that yield
hyperbolic 4-manifolds, up to the 1152 symmetries.

The search space has order (23!!) * 48^12: a perfect matching of the 24
sides with one of 48 realizable vertex bijections per matched pair.  The
searcher extends partial pairings depth-first, always choosing the side
with the most already-constrained ridge states, and prunes on three
incremental conditions: ridge chains may never exceed four gluing steps,
a closed ridge cycle must have length four and trivial vertex return, and
edge classes may never exceed eight members (and must hit exactly eight
when complete).  Symmetry is broken by keeping only pairings whose side-1
row is minimal over the conjugation orbit, with a post-hoc
canonicalize-and-dedupe as backstop.  Everything emitted is re-checked by
the exact matrix machinery in poincare before it counts.

A deliberately naive reference enumerator (fixed side order, no chain
bookkeeping, matrix holonomy checks only on fully determined cycles) is
provided as a completeness oracle for prefix-restricted comparisons.
"""

import hashlib
import os
from multiprocessing import Pool

from .pairing import SidePairing, serialize_pairing
from .poincare import cusp_count, is_manifold
from .polytope import standard_cell
from . import lorentz

IDENTITY_TRIPLE = (0, 1, 2)

# the six permutations of three symbols, as composition-table codes
PERM3 = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))
PERM3_INDEX = {p: k for k, p in enumerate(PERM3)}
COMP3 = tuple(tuple(PERM3_INDEX[(PERM3[a][PERM3[b][0]],
                                 PERM3[a][PERM3[b][1]],
                                 PERM3[a][PERM3[b][2]])]
                    for b in range(6)) for a in range(6))
ID3 = PERM3_INDEX[IDENTITY_TRIPLE]


# ---------------------------------------------------------------------------
# conjugation and canonical forms


def conjugate_key(p, sym_idx, model=None):
    """Serialization key of the pairing conjugated by one symmetry."""
    model = model or p.model
    sp = model.side_perm[sym_idx]
    vp = model.vert_perm[sym_idx]
    vmaps = [None] + [p.vmap(i) for i in range(1, 25)]
    rows = []
    for i in range(1, 25):
        j = p.sigma[i]
        k, l = sp[i], sp[j]
        if k < l:
            vm = vmaps[i]
            mapped = {vp[a]: vp[b] for a, b in vm.items()}
            images = tuple(mapped[a] for a in model.sorted_side_vertices[k])
            rows.append((k, l, images))
    rows.sort()
    return tuple(rows)


def canonicalize(p):
    """Minimal conjugate of a pairing under the 1152 symmetries."""
    model = p.model
    best = None
    for k in range(1152):
        key = conjugate_key(p, k, model)
        if best is None or key < best:
            best = key
    return pairing_from_key(best, model)


def canonical_key(p):
    model = p.model
    return min(conjugate_key(p, k, model) for k in range(1152))


def pairing_from_key(key, model=None):
    model = model or standard_cell()
    rows = []
    for i, j, images in key:
        src = model.sorted_side_vertices[i]
        rows.append((i, j, dict(zip(src, images))))
    return SidePairing.from_rows(rows, model=model)


def stabilizer_indices(p):
    """Symmetries whose conjugation fixes the pairing."""
    model = p.model
    own = p.key()
    return [k for k in range(1152) if conjugate_key(p, k, model) == own]


# ---------------------------------------------------------------------------
# precomputed search tables


class _Tables:
    """Flat lookup tables for the incremental search, built once."""

    def __init__(self, model):
        self.model = model
        ridges = model.ridges
        self.state_index = {}
        self.states = []
        for r, ((s1, s2), _) in enumerate(ridges):
            for s in (s1, s2):
                self.state_index[(r, s)] = len(self.states)
                self.states.append((r, s))
        self.states_of_side = [[] for _ in range(25)]
        for sid, (r, s) in enumerate(self.states):
            self.states_of_side[s].append(sid)

        self.rows = []            # row dicts
        self.rows_by_pair = {}
        for i in range(1, 25):
            for j in range(i + 1, 25):
                lst = []
                for images, sym in model.pair_candidates.get((i, j), []):
                    lst.append(self._build_row(i, j, images, sym))
                if lst:
                    self.rows_by_pair[(i, j)] = lst

        # a row is determined by its partner side plus its action on one
        # ridge: (side, partner, ridge, images of sorted ridge vertices)
        self.action_lookup = {}
        for row in self.rows:
            for side, partner, vm in ((row["i"], row["j"], row["fwd"]),
                                      (row["j"], row["i"], row["bwd"])):
                for r in model.ridges_of_side[side]:
                    verts = model.ridges[r][1]
                    key = (side, partner, r, tuple(vm[v] for v in verts))
                    if key in self.action_lookup:
                        raise AssertionError("ridge action does not "
                                             "determine the row")
                    self.action_lookup[key] = row

    def _build_row(self, i, j, images, sym):
        model = self.model
        rid = len(self.rows)
        fwd = [0] * 25
        bwd = [0] * 25
        for a, b in zip(model.sorted_side_vertices[i], images):
            fwd[a] = b
            bwd[b] = a
        transitions = []
        for r in model.ridges_of_side[i]:
            transitions.append(self._transition(r, i, j, fwd))
        for r in model.ridges_of_side[j]:
            transitions.append(self._transition(r, j, i, bwd))
        edge_pairs = []
        for e in model.edges_of_side[i]:
            a, b = model.edges[e][0]
            e2 = model.edge_index[tuple(sorted((fwd[a], fwd[b])))]
            edge_pairs.append((e, e2))
        row = {
            "id": rid, "i": i, "j": j, "images": images, "sym": sym,
            "fwd": tuple(fwd), "bwd": tuple(bwd),
            "transitions": tuple(transitions),
            "edge_pairs": tuple(edge_pairs),
            "slots_i": model.edges_of_side[i],
            "slots_j": model.edges_of_side[j],
        }
        self.rows.append(row)
        return row

    def _transition(self, r, src_side, dst_side, vmap):
        model = self.model
        verts = model.ridges[r][1]
        img = tuple(sorted(vmap[v] for v in verts))
        r2 = model.ridge_index[img]
        sides2 = model.ridges[r2][0]
        other = sides2[0] if sides2[1] == dst_side else sides2[1]
        triple = tuple(img.index(vmap[v]) for v in verts)
        return (self.state_index[(r, src_side)],
                self.state_index[(r2, other)], triple)


_TABLES = None


def search_tables(model=None):
    global _TABLES
    if _TABLES is None:
        _TABLES = _Tables(model or standard_cell())
    return _TABLES


def _compose(outer, inner):
    return (outer[inner[0]], outer[inner[1]], outer[inner[2]])


# ---------------------------------------------------------------------------
# incremental partial pairing


class PartialPairing:
    """A partial side-pairing with incremental ridge and edge bookkeeping.

    Rows are assigned and retracted stack-wise; every mutation is recorded
    for exact undo.  Ridge states carry successor/predecessor transitions
    with vertex triple maps; edges live in a union-find with class sizes
    and open (unassigned) side slots.
    """

    def __init__(self, tables):
        self.t = tables
        self.partner = [0] * 25
        self.row_of = [None] * 25
        self.succ = [None] * 192
        self.pred = [None] * 192
        self.eparent = list(range(96))
        self.esize = [1] * 96
        self.eslots = [3] * 96
        self.trail = []
        self.depth = 0

    def efind(self, x):
        while self.eparent[x] != x:
            x = self.eparent[x]
        return x

    def rows(self):
        out = []
        for i in range(1, 25):
            j = self.partner[i]
            if j > i:
                row = self.row_of[i]
                out.append((i, j, row["images"]))
        return out

    def as_pairing(self, model):
        return SidePairing.from_rows(
            [(i, j, dict(zip(model.sorted_side_vertices[i], images)))
             for i, j, images in self.rows()], model=model)

    # -- assignment with undo ------------------------------------------

    def try_row(self, row):
        """Assign a row; returns False (after self-undo) if a condition
        fails."""
        mark = len(self.trail)
        ok = self._assign(row)
        if not ok:
            self.undo_to(mark)
            return False
        self.trail.append(("mark", mark))
        self.depth += 1
        return True

    def retract(self):
        """Undo the most recent successful try_row."""
        while self.trail:
            op = self.trail.pop()
            if op[0] == "mark":
                self.depth -= 1
                self.undo_to(op[1])
                return
        raise AssertionError("nothing to retract")

    def undo_to(self, mark):
        while len(self.trail) > mark:
            op = self.trail.pop()
            kind = op[0]
            if kind == "partner":
                self.partner[op[1]] = 0
                self.partner[op[2]] = 0
                self.row_of[op[1]] = None
                self.row_of[op[2]] = None
            elif kind == "succ":
                self.succ[op[1]] = None
            elif kind == "pred":
                self.pred[op[1]] = None
            elif kind == "slot":
                self.eslots[op[1]] += 1
            elif kind == "union":
                child, root, size, slots = op[1], op[2], op[3], op[4]
                self.eparent[child] = child
                self.esize[root] = size
                self.eslots[root] = slots

    def _assign(self, row):
        i, j = row["i"], row["j"]
        if self.partner[i] or self.partner[j]:
            return False
        self.partner[i], self.partner[j] = j, i
        self.row_of[i] = self.row_of[j] = row
        self.trail.append(("partner", i, j))

        new_states = []
        for src, dst, triple in row["transitions"]:
            self.succ[src] = (dst, triple)
            self.pred[dst] = (src, triple)
            self.trail.append(("succ", src))
            self.trail.append(("pred", dst))
            new_states.append(src)
        for src in new_states:
            if not self._chain_ok(src):
                return False

        touched = set()
        for e in row["slots_i"]:
            r = self.efind(e)
            self.eslots[r] -= 1
            self.trail.append(("slot", r))
            touched.add(r)
        for e in row["slots_j"]:
            r = self.efind(e)
            self.eslots[r] -= 1
            self.trail.append(("slot", r))
            touched.add(r)
        for e1, e2 in row["edge_pairs"]:
            r1, r2 = self.efind(e1), self.efind(e2)
            if r1 == r2:
                continue
            if r1 > r2:
                r1, r2 = r2, r1
            if self.esize[r1] + self.esize[r2] > 8:
                return False
            self.trail.append(("union", r2, r1, self.esize[r1],
                               self.eslots[r1]))
            self.eparent[r2] = r1
            self.esize[r1] += self.esize[r2]
            self.eslots[r1] += self.eslots[r2]
            touched.discard(r2)
            touched.add(r1)
        for r in touched:
            r = self.efind(r)
            if self.eslots[r] == 0 and self.esize[r] != 8:
                return False
        return True

    def _chain_ok(self, state):
        """Walk the chain through a newly defined transition."""
        # walk back to the chain start (or detect a cycle through state)
        start = state
        steps = 0
        while True:
            prev = self.pred[start]
            if prev is None:
                break
            start = prev[0]
            steps += 1
            if start == state:
                break
            if steps > 8:
                return False
        # walk forward from the start, composing triple maps
        cur = start
        triple = IDENTITY_TRIPLE
        length = 0
        while True:
            nxt = self.succ[cur]
            if nxt is None:
                if length < 3:
                    return True
                if length > 3:
                    return False
                return self._closable(start, cur, triple)
            cur, m = nxt[0], nxt[1]
            triple = _compose(m, triple)
            length += 1
            if cur == start:
                return length == 4 and triple == IDENTITY_TRIPLE
            if length > 4:
                return False

    def _closable(self, start, end, mu):
        """A length-3 open chain survives only if its unique closing row is
        realizable and the forced partner side is still free."""
        t = self.t
        r0, s0 = t.states[start]
        r_end, a_end = t.states[end]
        z = t.model.other_side_of_ridge(r0, s0)
        if z == a_end or self.partner[z]:
            return False
        start_verts = t.model.ridges[r0][1]
        images = [0, 0, 0]
        images[mu[0]] = start_verts[0]
        images[mu[1]] = start_verts[1]
        images[mu[2]] = start_verts[2]
        return (a_end, z, r_end, tuple(images)) in t.action_lookup

    # -- heuristics and forcing ------------------------------------------

    def _chain_into(self, sid):
        """Length and start of the transition chain ending at a state."""
        length = 0
        cur = sid
        while True:
            prev = self.pred[cur]
            if prev is None:
                return length, cur
            cur = prev[0]
            length += 1
            if length > 3:
                raise AssertionError("overlong chain survived pruning")

    def best_chain(self, a):
        """(max incoming chain length, state achieving it) for side a."""
        best_len, best_sid = -1, None
        for sid in self.t.states_of_side[a]:
            length, _ = self._chain_into(sid)
            if length > best_len:
                best_len, best_sid = length, sid
        return best_len, best_sid

    def forced_row(self, a, sid):
        """The unique row that can close the length-3 chain into side a's
        state sid, or None if no row can (a dead branch)."""
        t = self.t
        # walk back composing the chain map from the start state
        hops = []
        cur = sid
        while True:
            prev = self.pred[cur]
            if prev is None:
                break
            hops.append(prev[1])
            cur = prev[0]
        start = cur
        mu = IDENTITY_TRIPLE
        for m in reversed(hops):
            mu = _compose(m, mu)
        r_cur = t.states[sid][0]
        r0, s0 = t.states[start]
        partner = t.model.other_side_of_ridge(r0, s0)
        if partner == a or self.partner[partner]:
            return None
        # the closing transition must map the chain composition back to the
        # identity: current-ridge vertex at position mu[k] goes to start
        # vertex at position k
        start_verts = t.model.ridges[r0][1]
        images = [0, 0, 0]
        for k in range(3):
            images[mu[k]] = start_verts[k]
        key = (a, partner, r_cur, tuple(images))
        return t.action_lookup.get(key)

    def next_side(self, strategic=True):
        """The side to extend next: side 1 first, then any side with a
        forced closing row, then the side with the most constrained ridge
        states."""
        if not self.partner[1]:
            return 1, None
        best, best_score, best_sid = 0, -1, None
        for a in range(1, 25):
            if self.partner[a]:
                continue
            if not strategic:
                return a, None
            length, sid = self.best_chain(a)
            score = 4 * length + sum(
                1 for s in self.t.states_of_side[a]
                if self.pred[s] is not None)
            if length == 3:
                return a, sid
            if score > best_score:
                best, best_score, best_sid = a, score, None
        return best, best_sid


# ---------------------------------------------------------------------------
# first-row symmetry breaking


class _RowMinimality:
    """Prune partial pairings whose orbit admits a smaller side-1 row."""

    def __init__(self, tables):
        self.t = tables
        model = tables.model
        self.to_side1 = [[] for _ in range(25)]
        for k in range(1152):
            sp = model.side_perm[k]
            for i in range(1, 25):
                if sp[i] == 1:
                    self.to_side1[i].append(k)

    def side1_image(self, row_i, row_j, images_fwd, sym):
        """The (partner, images) of the conjugated row at side 1, where the
        symmetry maps side row_i to side 1."""
        model = self.t.model
        sp, vp = model.side_perm[sym], model.vert_perm[sym]
        j2 = sp[row_j]
        mapped = {}
        for a, b in zip(model.sorted_side_vertices[row_i], images_fwd):
            mapped[vp[a]] = vp[b]
        images = tuple(mapped[a] for a in model.sorted_side_vertices[1])
        return (j2, images)

    def row_value(self, row):
        return (row["j"], row["images"])

    def is_minimal_first(self, row):
        """Whether a side-1 row is minimal in its own conjugation orbit."""
        val = self.row_value(row)
        return not self.beats(row, val)

    def beats(self, row, current):
        """Does any symmetry send this row to a side-1 row below current?"""
        model = self.t.model
        i, j = row["i"], row["j"]
        for src, other in ((i, j), (j, i)):
            for sym in self.to_side1[src]:
                sp = model.side_perm[sym]
                j2 = sp[other]
                if j2 > current[0]:
                    continue
                if src == i:
                    img = self.side1_image(i, j, row["images"], sym)
                else:
                    inv = row["bwd"]
                    images_fwd = tuple(
                        inv[a] for a in model.sorted_side_vertices[j])
                    img = self.side1_image(j, i, images_fwd, sym)
                if img < current:
                    return True
        return False


# ---------------------------------------------------------------------------
# enumeration engines


class CensusResult:
    """Canonical pairings found, their invariant summaries, and counters."""

    def __init__(self, pairings, summaries, counters):
        self.pairings = pairings
        self.summaries = summaries
        self.counters = counters

    def __len__(self):
        return len(self.pairings)


def _record(p):
    return serialize_pairing(p).strip().replace("\n", " | ")


def record_to_pairing(record, model=None):
    from .pairing import parse_pairing
    return parse_pairing(record.replace(" | ", "\n"), model=model)


def enumerate_census(prefix=None, one_cusped=False, limit=None,
                     shards=1, shard_index=None, workers=None,
                     strategic=True, symmetry_prune=True, deep_prune=True,
                     max_depth=None, checkpoint=None, records_out=None,
                     canonical=True, model=None, progress=None):
    """Run the census search; returns a CensusResult of canonical forms.

    prefix: iterable of (i, j, images) rows fixing the start of every
    pairing (symmetry pruning is disabled under a prefix).  one_cusped
    filters emissions; limit caps them.  shards/shard_index split the
    top-level branching deterministically; workers (default from
    CELL24_WORKERS) parallelizes shards within this call.  canonical=False
    skips the final canonicalization (raw emissions, as prefix-restricted
    oracle comparisons need).  Output is independent of worker count.
    """
    model = model or standard_cell()
    tables = search_tables(model)
    prefix_rows = _normalize_prefix(prefix, tables)
    if prefix_rows:
        symmetry_prune = False

    shard_list = (list(range(shards)) if shard_index is None
                  else [shard_index])
    done = _read_checkpoint(checkpoint) if checkpoint else set()
    workers = workers or int(os.environ.get("CELL24_WORKERS", "1"))

    results = []
    pending = [s for s in shard_list if s not in done]
    args = [(s, shards, prefix_rows, one_cusped, limit, strategic,
             symmetry_prune, deep_prune, max_depth) for s in pending]
    if workers > 1 and len(pending) > 1:
        with Pool(workers) as pool:
            shard_outputs = pool.map(_run_shard_star, args)
    else:
        shard_outputs = [_run_shard_star(a) for a in args]

    counters = {"nodes": 0, "emitted": 0, "pruned_ridge": 0,
                "pruned_edge": 0, "pruned_symmetry": 0, "final_rejects": 0,
                "ridge_pass_edge_fail": 0, "resumed_shards": len(done)}
    records = []
    if checkpoint and done and records_out and os.path.exists(records_out):
        with open(records_out) as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    shard_tag, rec = line.split("\t", 1)
                    if int(shard_tag) in done:
                        records.append(rec)
    for (shard, recs, ctr) in shard_outputs:
        records.extend(recs)
        for k, v in ctr.items():
            counters[k] = counters.get(k, 0) + v
        if records_out:
            with open(records_out, "a") as fh:
                for rec in recs:
                    fh.write("%d\t%s\n" % (shard, rec))
        if checkpoint:
            digest = hashlib.sha256(
                "\n".join(sorted(recs)).encode()).hexdigest()[:16]
            with open(checkpoint, "a") as fh:
                fh.write("shard %d done emitted=%d digest=%s\n"
                         % (shard, len(recs), digest))
        if progress:
            progress(shard, ctr)

    # dedupe + deterministic order (canonical forms for full runs)
    seen = {}
    for rec in records:
        p = record_to_pairing(rec, model)
        key = canonical_key(p) if canonical else p.key()
        if key not in seen:
            seen[key] = pairing_from_key(key, model) if canonical else p
    pairings = [seen[k] for k in sorted(seen)]
    if limit is not None:
        pairings = pairings[:limit]
    summaries = [{"cusps": cusp_count(q)[0]} for q in pairings]
    if one_cusped:
        keep = [i for i, s in enumerate(summaries) if s["cusps"] == 1]
        pairings = [pairings[i] for i in keep]
        summaries = [summaries[i] for i in keep]
    counters["canonical"] = len(pairings)
    return CensusResult(pairings, summaries, counters)


def _run_shard_star(args):
    return _run_shard(*args)


def _normalize_prefix(prefix, tables):
    if prefix is None:
        return []
    rows = []
    if isinstance(prefix, SidePairing):
        prefix = prefix.rows()
    for item in prefix:
        i, j, images = item
        if i > j:
            i, j = j, i
        for row in tables.rows_by_pair[(i, j)]:
            if row["images"] == tuple(images):
                rows.append(row)
                break
        else:
            raise ValueError("prefix row %s is not realizable" % ((i, j),))
    return rows


def _run_shard(shard, nshards, prefix_rows, one_cusped, limit, strategic,
               symmetry_prune, deep_prune, max_depth):
    model = standard_cell()
    tables = search_tables(model)
    state = PartialPairing(tables)
    minim = _RowMinimality(tables) if symmetry_prune else None
    counters = {"nodes": 0, "emitted": 0, "pruned_ridge": 0,
                "pruned_edge": 0, "pruned_symmetry": 0, "final_rejects": 0,
                "ridge_pass_edge_fail": 0}
    for row in prefix_rows:
        if not state.try_row(row):
            return shard, [], counters

    # top-level candidates for sharding
    side, forced_sid = state.next_side(strategic)
    top = [] if side == 0 else _candidates(state, tables, side, forced_sid)
    if symmetry_prune and side == 1:
        top = [row for row in top if minim.is_minimal_first(row)]
    top = [row for k, row in enumerate(top) if k % nshards == shard]

    records = []

    def emit():
        p = state.as_pairing(model)
        verdict = is_manifold(p)
        if not verdict.ok:
            counters["final_rejects"] += 1
            if verdict.ridge_report is not None and \
                    verdict.ridge_report.all_pass:
                counters["ridge_pass_edge_fail"] += 1
            return
        if one_cusped and cusp_count(p)[0] != 1:
            return
        records.append(_record(p))
        counters["emitted"] += 1

    def dfs(depth):
        if limit is not None and counters["emitted"] >= limit:
            return
        counters["nodes"] += 1
        if state.depth == 12:
            emit()
            return
        if max_depth is not None and depth >= max_depth:
            return
        side_, forced_ = state.next_side(strategic)
        for row in _candidates(state, tables, side_, forced_):
            if not state.try_row(row):
                counters["pruned_ridge"] += 1
                continue
            prune = False
            if symmetry_prune and deep_prune and state.depth > 1:
                val = (state.partner[1], state.row_of[1]["images"])
                if minim.beats(row, val):
                    counters["pruned_symmetry"] += 1
                    prune = True
            if not prune:
                dfs(depth + 1)
            state.retract()
            if limit is not None and counters["emitted"] >= limit:
                return

    if side == 0:
        # the prefix is already complete; only shard 0 reports it
        if shard == 0 and state.depth == 12:
            emit()
    for row in top:
        if not state.try_row(row):
            counters["pruned_ridge"] += 1
            continue
        dfs(0)
        state.retract()
        if limit is not None and counters["emitted"] >= limit:
            break
    return shard, records, counters


def _candidates(state, tables, side, forced_sid=None):
    if forced_sid is not None:
        row = state.forced_row(side, forced_sid)
        return [row] if row is not None else []
    out = []
    for j in range(1, 25):
        if j == side or state.partner[j]:
            continue
        pair = (side, j) if side < j else (j, side)
        out.extend(tables.rows_by_pair[pair])
    return out


def _read_checkpoint(path):
    done = set()
    if path and os.path.exists(path):
        with open(path) as fh:
            for line in fh:
                parts = line.split()
                if len(parts) >= 3 and parts[0] == "shard" and \
                        parts[2] == "done":
                    done.add(int(parts[1]))
    return done


# ---------------------------------------------------------------------------
# reference oracle


def reference_enumerate(prefix=None, limit=None, model=None):
    """Exhaustive reference enumerator for prefix-restricted comparisons.

    Fixed lowest-side ordering and no incremental bookkeeping: a partial
    assignment is rejected only when a fully determined ridge cycle fails
    the exact matrix test; complete pairings pass through is_manifold.
    Independent of the production searcher's code paths.
    """
    model = model or standard_cell()
    tables = search_tables(model)
    prefix_rows = _normalize_prefix(prefix, tables)

    partner = [0] * 25
    vmaps = [None] * 25
    gmats = [None] * 25
    records = []

    refl = [None] + [model.side_reflection(s) for s in range(1, 25)]

    def assign(row):
        i, j = row["i"], row["j"]
        partner[i], partner[j] = j, i
        vmaps[i], vmaps[j] = row["fwd"], row["bwd"]
        f = model.symmetries[row["sym"]]
        gmats[i] = lorentz.matmul(refl[j], f)
        gmats[j] = lorentz.inverse(gmats[i])

    def unassign(row):
        i, j = row["i"], row["j"]
        partner[i] = partner[j] = 0
        vmaps[i] = vmaps[j] = None
        gmats[i] = gmats[j] = None

    def step(rid, side):
        vm = vmaps[side]
        verts = model.ridges[rid][1]
        img = tuple(sorted(vm[v] for v in verts))
        r2 = model.ridge_index[img]
        s1, s2 = model.ridges[r2][0]
        other = s1 if s2 == partner[side] else s2
        return r2, other

    def cycles_ok(row):
        # every newly completable cycle passes through the new row
        for start_side in (row["i"], row["j"]):
            for rid in model.ridges_of_side[start_side]:
                state = (rid, start_side)
                word = []
                cur = state
                ok = None
                for _ in range(5):
                    if vmaps[cur[1]] is None:
                        ok = True   # cycle not yet determined
                        break
                    word.append(cur[1])
                    cur = step(*cur)
                    if cur == state:
                        ok = len(word) == 4 and lorentz.matmul_chain(
                            gmats[a] for a in reversed(word)) \
                            == lorentz.IDENTITY
                        break
                if ok is None:
                    ok = False   # ran past length 4 without closing
                if not ok:
                    return False
        return True

    for row in prefix_rows:
        assign(row)
        if not cycles_ok(row):
            return []

    def next_side():
        for a in range(1, 25):
            if not partner[a]:
                return a
        return 0

    def dfs():
        if limit is not None and len(records) >= limit:
            return
        side = next_side()
        if side == 0:
            p = SidePairing.from_rows(
                [(i, partner[i],
                  {a: vmaps[i][a] for a in model.sorted_side_vertices[i]})
                 for i in range(1, 25) if i < partner[i]], model=model)
            if is_manifold(p).ok:
                records.append(_record(p))
            return
        for j in range(1, 25):
            if j == side or partner[j]:
                continue
            pair = (side, j) if side < j else (j, side)
            for row in tables.rows_by_pair[pair]:
                assign(row)
                if cycles_ok(row):
                    dfs()
                unassign(row)
                if limit is not None and len(records) >= limit:
                    return

    dfs()
    return records
