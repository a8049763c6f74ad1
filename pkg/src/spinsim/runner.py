"""Config-driven experiment execution, figure-reproduction presets and the
decomposition verification suite.

Energies are expressed in units of J = 1 and times in 1/J throughout the CSV
output.  Runs are deterministic: identical configs produce byte-identical CSV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import compiler, gates, observables, pauli, trotter
from .compiler import Circuit, GateSet
from .errors import InputError
from .statevector import StateVector, probability, product_state
from .trotter import TrotterPlan

MODELS = ("heisenberg", "xyz", "xy", "tim", "hubbard2", "pauli-file")
FIGURE_IDS = ("fig2", "fig4a", "fig4b", "fig4c", "fig6a", "fig6b", "fig6c")


@dataclass(frozen=True)
class ObservableSpec:
    kind: str              # magnetization | total_magnetization | probability |
                           # correlation | spectrum | fidelity
    args: tuple = ()


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    n_qubits: int
    couplings: dict = field(default_factory=dict)
    initial: str = ""
    gate_set: GateSet = GateSet.S1
    plan: TrotterPlan = field(default_factory=lambda: TrotterPlan.fixed_n(5))
    t_max: float = math.pi
    points: int = 61
    observables: tuple[ObservableSpec, ...] = ()
    heis2_variant: str | None = None
    assumptions: tuple[str, ...] = ()
    name: str = ""


# --- config text format -------------------------------------------------------

def _parse_sections(text: str) -> dict[str, list[tuple[str, str, int]]]:
    sections: dict[str, list[tuple[str, str, int]]] = {}
    current = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            sections.setdefault(current, [])
            continue
        if "=" not in line:
            raise InputError(f"line {ln}: expected `key = value`, got {raw!r}")
        if current is None:
            raise InputError(f"line {ln}: key outside any [section]")
        key, value = line.split("=", 1)
        sections[current].append((key.strip().lower(), value.strip(), ln))
    return sections


def _single(entries, key, path, default=None, required=False):
    found = [v for k, v, _ in entries if k == key]
    if not found:
        if required:
            raise InputError(f"{path}: missing required key {key!r}")
        return default
    if len(found) > 1:
        raise InputError(f"{path}: key {key!r} given more than once")
    return found[0]


def _floats(raw: str, path: str) -> list[float]:
    try:
        return [float(x) for x in raw.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"{path}: cannot parse numbers from {raw!r}") from exc


def parse_config(text: str) -> ExperimentConfig:
    sec = _parse_sections(text)
    model_entries = sec.get("model", [])
    kind = _single(model_entries, "kind", "model.kind", required=True).lower()
    if kind not in MODELS:
        raise InputError(f"model.kind: unknown model {kind!r}; choose from {MODELS}")
    couplings: dict = {}
    if kind == "hubbard2":
        n_qubits = 4
        couplings["v"] = float(_single(model_entries, "v", "model.v", default="1.0"))
        couplings["u"] = float(_single(model_entries, "u", "model.u", default="0.0"))
    else:
        n_raw = _single(model_entries, "n_qubits", "model.n_qubits", required=True)
        n_qubits = int(n_raw)
        if kind == "heisenberg":
            j = _single(model_entries, "j", "model.j", default="1.0")
            couplings["j"] = _floats(j, "model.j")
            couplings["bg"] = float(_single(model_entries, "bg", "model.bg", default="0.0"))
        elif kind in ("xyz", "xy"):
            couplings["jxx"] = float(_single(model_entries, "jxx", "model.jxx", default="1.0"))
            couplings["jyy"] = float(_single(model_entries, "jyy", "model.jyy", default="1.0"))
            couplings["jzz"] = (
                0.0 if kind == "xy"
                else float(_single(model_entries, "jzz", "model.jzz", default="1.0"))
            )
        elif kind == "tim":
            h = _single(model_entries, "h", "model.h", default=None)
            bg = _single(model_entries, "bg", "model.bg", default=None)
            if h is not None:
                couplings["h"] = _floats(h, "model.h")
            elif bg is not None:
                couplings["h"] = [float(bg) / 2.0] * n_qubits
            else:
                raise InputError("model: tim needs either h or bg")
            couplings["jzz"] = float(_single(model_entries, "jzz", "model.jzz", default="1.0"))
        elif kind == "pauli-file":
            path = _single(model_entries, "file", "model.file", required=True)
            couplings["file"] = path

    init_entries = sec.get("initial", [])
    initial = _single(init_entries, "state", "initial.state", default="0" * n_qubits)

    evo = sec.get("evolution", [])
    gs_raw = _single(evo, "gateset", "evolution.gateset", default="S1").upper()
    try:
        gate_set = GateSet(gs_raw)
    except ValueError as exc:
        raise InputError(f"evolution.gateset: unknown gate set {gs_raw!r}") from exc
    order = int(_single(evo, "order", "evolution.order", default="1"))
    schedule = _single(evo, "schedule", "evolution.schedule", default="fixed_n").lower()
    if schedule == "fixed_n":
        steps = int(_single(evo, "steps", "evolution.steps", default="5"))
        plan = TrotterPlan.fixed_n(steps, order=order)
    elif schedule == "fixed_eps":
        eps = float(_single(evo, "eps", "evolution.eps", default="0.1"))
        growth = _single(evo, "growth", "evolution.growth", default="quadratic").lower()
        plan = TrotterPlan.fixed_eps(eps, growth=growth, order=order)
    else:
        raise InputError(
            f"evolution.schedule: expected fixed_n or fixed_eps, got {schedule!r}"
        )
    variant = _single(evo, "variant", "evolution.variant", default=None)

    time_entries = sec.get("time", [])
    t_max = float(_single(time_entries, "max", "time.max", default=str(math.pi)))
    points = int(_single(time_entries, "points", "time.points", default="61"))

    obs: list[ObservableSpec] = []
    for key, value, ln in sec.get("observables", []):
        if key != "observable":
            raise InputError(f"line {ln}: observables section only takes `observable = ...`")
        obs.append(_parse_observable(value, f"observables[{len(obs)}]"))

    return ExperimentConfig(
        model=kind,
        n_qubits=n_qubits,
        couplings=couplings,
        initial=initial,
        gate_set=gate_set,
        plan=plan,
        t_max=t_max,
        points=points,
        observables=tuple(obs),
        heis2_variant=variant,
    )


def _parse_observable(value: str, path: str) -> ObservableSpec:
    parts = value.split()
    kind = parts[0].lower()
    args = parts[1:]
    if kind == "magnetization":
        if len(args) != 1:
            raise InputError(f"{path}: magnetization takes one site argument")
        return ObservableSpec("magnetization", (int(args[0]),))
    if kind == "total_magnetization":
        return ObservableSpec("total_magnetization")
    if kind == "probability":
        if len(args) != 1:
            raise InputError(f"{path}: probability takes one bitstring argument")
        return ObservableSpec("probability", (args[0],))
    if kind == "correlation":
        if len(args) != 4:
            raise InputError(f"{path}: correlation takes `V W i j`")
        return ObservableSpec(
            "correlation", (args[0].upper(), args[1].upper(), int(args[2]), int(args[3]))
        )
    if kind == "spectrum":
        m = int(args[0]) if args else 1024
        return ObservableSpec("spectrum", (m,))
    if kind == "fidelity":
        if not args:
            raise InputError(f"{path}: fidelity takes a schedule, e.g. `fixed_n 5`")
        if args[0] == "fixed_n":
            return ObservableSpec("fidelity", ("fixed_n", int(args[1])))
        if args[0] == "fixed_eps":
            growth = args[2] if len(args) > 2 else "quadratic"
            return ObservableSpec("fidelity", ("fixed_eps", float(args[1]), growth))
        raise InputError(f"{path}: unknown fidelity schedule {args[0]!r}")
    raise InputError(f"{path}: unknown observable kind {kind!r}")


def validate_config(cfg: ExperimentConfig):
    if cfg.model not in MODELS:
        raise InputError(f"model: unknown model {cfg.model!r}")
    if cfg.n_qubits < 1:
        raise InputError(f"model.n_qubits: must be >= 1, got {cfg.n_qubits}")
    if len(cfg.initial) != cfg.n_qubits:
        raise InputError(
            f"initial.state: {cfg.initial!r} does not match n_qubits={cfg.n_qubits}"
        )
    if any(ch not in "01+-" for ch in cfg.initial):
        raise InputError(f"initial.state: only 0/1/+/- allowed, got {cfg.initial!r}")
    if cfg.points < 1:
        raise InputError(f"time.points: must be >= 1, got {cfg.points}")
    if not cfg.observables:
        raise InputError("observables: at least one observable is required")
    kinds = {o.kind for o in cfg.observables}
    if "spectrum" in kinds and len(cfg.observables) > 1:
        raise InputError("observables: spectrum must be the only observable")
    if "fidelity" in kinds and kinds != {"fidelity"}:
        raise InputError("observables: fidelity sweeps cannot mix with other kinds")
    for k, o in enumerate(cfg.observables):
        path = f"observables[{k}]"
        if o.kind == "magnetization":
            site = o.args[0]
            if not 1 <= site <= cfg.n_qubits:
                raise InputError(
                    f"{path}.site: site {site} out of range for {cfg.n_qubits} qubits"
                )
        elif o.kind == "probability":
            bits = o.args[0]
            if len(bits) != cfg.n_qubits or any(b not in "01" for b in bits):
                raise InputError(
                    f"{path}.bits: {bits!r} is not a {cfg.n_qubits}-bit string"
                )
        elif o.kind == "correlation":
            v, w, i, j = o.args
            if v not in "IXYZ" or w not in "IXYZ":
                raise InputError(f"{path}: V/W must be Pauli letters, got {v} {w}")
            for site, nm in ((i, "i"), (j, "j")):
                if not 1 <= site <= cfg.n_qubits:
                    raise InputError(
                        f"{path}.{nm}: site {site} out of range for {cfg.n_qubits} qubits"
                    )
        elif o.kind == "spectrum":
            m = o.args[0]
            if m < 2 or m & (m - 1):
                raise InputError(f"{path}.m: must be a power of two, got {m}")
    if cfg.heis2_variant is not None:
        if cfg.heis2_variant not in ("6cnot", "3cnot", "3uxy", "s4"):
            raise InputError(f"evolution.variant: unknown variant {cfg.heis2_variant!r}")
        ok = (
            cfg.model == "heisenberg"
            and cfg.n_qubits == 2
            and cfg.couplings.get("bg", 0.0) == 0.0
        )
        if not ok:
            raise InputError(
                "evolution.variant: fixed Heisenberg variants apply only to the "
                "2-qubit field-free Heisenberg model"
            )


def build_hamiltonian(cfg: ExperimentConfig) -> pauli.PauliHamiltonian:
    c = cfg.couplings
    if cfg.model == "heisenberg":
        return pauli.heisenberg_chain(cfg.n_qubits, c["j"], c.get("bg", 0.0))
    if cfg.model in ("xyz", "xy"):
        return pauli.xyz_chain(cfg.n_qubits, c["jxx"], c["jyy"], c.get("jzz", 0.0))
    if cfg.model == "tim":
        return pauli.tim_chain(cfg.n_qubits, c["h"], c["jzz"])
    if cfg.model == "hubbard2":
        return pauli.jordan_wigner(pauli.hubbard_2site(c["v"], c["u"]))
    if cfg.model == "pauli-file":
        if "text" in c:
            return pauli.parse_hamiltonian(c["text"], cfg.n_qubits)
        with open(c["file"], "r", encoding="utf-8") as fh:
            return pauli.parse_hamiltonian(fh.read(), cfg.n_qubits)
    raise InputError(f"model: unknown model {cfg.model!r}")


# --- figure presets -----------------------------------------------------------

def figure_preset(figure_id: str) -> ExperimentConfig:
    """Exact parameterization of the reproducible figures (J = 1 units)."""
    fid = figure_id.lower()
    if fid == "fig2":
        return ExperimentConfig(
            model="tim", n_qubits=2,
            couplings={"h": [1.0, 1.0], "jzz": 1.0},
            initial="00",
            plan=TrotterPlan.fixed_n(5),
            t_max=45.0, points=46,
            observables=(
                ObservableSpec("fidelity", ("fixed_n", 5)),
                ObservableSpec("fidelity", ("fixed_eps", 0.1, "linear")),
                ObservableSpec("fidelity", ("fixed_eps", 0.1, "quadratic")),
            ),
            name="fig2",
        )
    if fid == "fig4a":
        return ExperimentConfig(
            model="heisenberg", n_qubits=2,
            couplings={"j": [1.0], "bg": 0.0},
            initial="0+",
            plan=TrotterPlan.fixed_n(1),
            t_max=math.pi, points=61,
            observables=(
                ObservableSpec("magnetization", (1,)),
                ObservableSpec("magnetization", (2,)),
                ObservableSpec("total_magnetization"),
            ),
            heis2_variant="3cnot",
            name="fig4a",
        )
    if fid == "fig4b":
        return ExperimentConfig(
            model="heisenberg", n_qubits=3,
            couplings={"j": [1.0, 1.0], "bg": 20.0},
            initial="100",
            plan=TrotterPlan.fixed_n(5),
            t_max=math.pi, points=61,
            observables=(ObservableSpec("probability", ("100",)),),
            assumptions=("trotter steps n=5 (step count not stated for this figure)",),
            name="fig4b",
        )
    if fid == "fig4c":
        return ExperimentConfig(
            model="tim", n_qubits=2,
            couplings={"h": [1.0, 1.0], "jzz": 1.0},  # Bg = 2J -> h_i = Bg/2 = J
            initial="00",
            plan=TrotterPlan.fixed_n(5),
            t_max=math.pi, points=61,
            observables=(ObservableSpec("total_magnetization"),),
            assumptions=(
                "initial state |up up> = |00> (not stated for this figure)",
                "trotter steps n=5 (step count not stated for this figure)",
            ),
            name="fig4c",
        )
    if fid in ("fig6a", "fig6b", "fig6c"):
        site = {"fig6a": 1, "fig6b": 2, "fig6c": 3}[fid]
        return ExperimentConfig(
            model="heisenberg", n_qubits=3,
            couplings={"j": [1.0, 1.0], "bg": 20.0},
            initial="111",
            plan=TrotterPlan.fixed_n(5),
            t_max=math.pi, points=61,
            observables=(ObservableSpec("correlation", ("X", "X", site, 1)),),
            name=fid,
        )
    raise InputError(f"unknown figure id {figure_id!r}; valid ids: {', '.join(FIGURE_IDS)}")


# --- execution ----------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _scalar_value(obs: ObservableSpec, state: StateVector) -> float:
    if obs.kind == "magnetization":
        return observables.magnetization(state, obs.args[0])
    if obs.kind == "total_magnetization":
        return sum(
            observables.magnetization(state, i) for i in range(1, state.n_qubits + 1)
        )
    if obs.kind == "probability":
        return probability(state, obs.args[0])
    raise InputError(f"not a scalar observable: {obs.kind}")


def _scalar_name(obs: ObservableSpec) -> str:
    if obs.kind == "magnetization":
        return f"mz{obs.args[0]}"
    if obs.kind == "total_magnetization":
        return "mz_total"
    if obs.kind == "probability":
        return f"p{obs.args[0]}"
    raise InputError(f"not a scalar observable: {obs.kind}")


def _digital_circuit(cfg, h, t) -> tuple[Circuit, int]:
    if cfg.heis2_variant is not None:
        j = cfg.couplings["j"][0]
        return compiler.heisenberg2_circuit(j * t, (1, 2), cfg.heis2_variant), 1
    result = trotter.trotterize(h, t, cfg.plan, cfg.gate_set)
    return result.circuit, result.n_steps_used


def run(cfg: ExperimentConfig) -> str:
    """Execute a validated config; returns the CSV text (comments prefixed #)."""
    validate_config(cfg)
    header = [f"# spinsim run: model={cfg.model} n_qubits={cfg.n_qubits}"]
    if cfg.name:
        header.append(f"# preset: {cfg.name}")
    header.append(f"# couplings: {cfg.couplings}")
    header.append(
        f"# initial={cfg.initial} gateset={cfg.gate_set.value} plan={cfg.plan}"
    )
    for a in cfg.assumptions:
        header.append(f"# assumption: {a}")

    kinds = {o.kind for o in cfg.observables}
    if kinds == {"fidelity"}:
        return _run_fidelity(cfg, header)
    if kinds == {"spectrum"}:
        return _run_spectrum(cfg, header)
    return _run_evolution(cfg, header)


def _run_fidelity(cfg, header) -> str:
    h = build_hamiltonian(cfg)
    psi0 = product_state(cfg.n_qubits, cfg.initial)
    deltas = np.linspace(0.0, cfg.t_max, cfg.points)
    names = []
    plans = []
    for o in cfg.observables:
        if o.args[0] == "fixed_n":
            names.append(f"fid_fixed{o.args[1]}")
            plans.append(TrotterPlan.fixed_n(o.args[1], order=cfg.plan.order))
        else:
            names.append(f"fid_{o.args[2]}")
            plans.append(TrotterPlan.fixed_eps(o.args[1], o.args[2], order=cfg.plan.order))
    rows = ["delta," + ",".join(names)]
    steps_used: list[list[int]] = [[] for _ in plans]
    for d in deltas:
        vals = []
        for k, plan in enumerate(plans):
            vals.append(trotter.digital_fidelity(psi0, h, float(d), plan, cfg.gate_set))
            steps_used[k].append(trotter.trotterize(h, float(d), plan, cfg.gate_set).n_steps_used)
        rows.append(",".join([_fmt(d)] + [_fmt(v) for v in vals]))
    for name, ns in zip(names, steps_used):
        header.append(f"# n_steps_used[{name}]: {' '.join(str(n) for n in ns)}")
    return "\n".join(header + rows) + "\n"


def _run_spectrum(cfg, header) -> str:
    h = build_hamiltonian(cfg)
    m = cfg.observables[0].args[0]
    spec = observables.SpectrumSpec(
        operator=h, initial=cfg.initial, m=m,
        plan=cfg.plan if cfg.plan.eps is not None else TrotterPlan.fixed_eps(0.1),
        gate_set=cfg.gate_set,
    )
    series = observables.unitary_expectation_series(spec)
    peaks = observables.spectrum_from_series(series, spec.spacing())
    header.append(f"# theta grid: m={m} dtheta={_fmt(spec.spacing())}")
    rows = ["q,weight"] + [f"{_fmt(q)},{_fmt(w)}" for q, w in peaks]
    return "\n".join(header + rows) + "\n"


def _run_evolution(cfg, header) -> str:
    h = build_hamiltonian(cfg)
    times = np.linspace(0.0, cfg.t_max, cfg.points)
    scalar_obs = [o for o in cfg.observables if o.kind != "correlation"]
    corr_obs = [o for o in cfg.observables if o.kind == "correlation"]

    columns: list[str] = []
    for o in scalar_obs:
        columns += [_scalar_name(o), _scalar_name(o) + "_qs"]
    for o in corr_obs:
        v, w, i, j = o.args
        base = f"c{v.lower()}{w.lower()}_{i}_{j}"
        columns += [
            f"{base}_re_qs", f"{base}_im_qs",
            f"{base}_re_digital", f"{base}_im_digital",
            f"{base}_re_exact", f"{base}_im_exact",
        ]
    if corr_obs:
        header.append("# correlation columns carry the spin scaling <s s> = <sigma sigma>/4")
        header.append("# qs: ancilla route (trotter); digital: direct route (trotter); exact: direct route (exact propagator)")

    table = np.zeros((len(times), len(columns)))
    col = 0
    steps_per_t: list[int] = []
    if scalar_obs:
        for k, t in enumerate(times):
            exact_state = StateVector(
                cfg.n_qubits,
                trotter.exact_propagator(h, float(t)) @ product_state(cfg.n_qubits, cfg.initial).amplitudes,
            )
            circ, n_used = _digital_circuit(cfg, h, float(t))
            digital_state = compiler.run_circuit(product_state(cfg.n_qubits, cfg.initial), circ)
            steps_per_t.append(n_used)
            for m, o in enumerate(scalar_obs):
                table[k, col + 2 * m] = _scalar_value(o, exact_state)
                table[k, col + 2 * m + 1] = _scalar_value(o, digital_state)
        col += 2 * len(scalar_obs)
    for o in corr_obs:
        v, w, i, j = o.args
        base_kwargs = dict(
            v=v, w=w, vq=i, wq=j, initial=cfg.initial, hamiltonian=h,
            times=tuple(float(t) for t in times),
        )
        spec_trotter = observables.CorrelationSpec(
            evolution="trotter", plan=cfg.plan, gate_set=cfg.gate_set, **base_kwargs
        )
        spec_exact = observables.CorrelationSpec(evolution="exact", **base_kwargs)
        qs = observables.spin_correlation(observables.correlation_ancilla(spec_trotter))
        digital = observables.spin_correlation(observables.correlation_direct(spec_trotter))
        exact = observables.spin_correlation(observables.correlation_direct(spec_exact))
        table[:, col + 0], table[:, col + 1] = qs.real, qs.imag
        table[:, col + 2], table[:, col + 3] = digital.real, digital.imag
        table[:, col + 4], table[:, col + 5] = exact.real, exact.imag
        col += 6
        if not steps_per_t:
            steps_per_t = [
                trotter.trotterize(h, float(t), cfg.plan, cfg.gate_set).n_steps_used
                for t in times
            ]
    if steps_per_t:
        header.append(f"# n_steps_used: {' '.join(str(n) for n in steps_per_t)}")
    rows = ["t," + ",".join(columns)]
    for k, t in enumerate(times):
        rows.append(",".join([_fmt(t)] + [_fmt(x) for x in table[k]]))
    return "\n".join(header + rows) + "\n"


# --- verification suite ---------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    max_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tol


def _unitary_with(circ: Circuit, overrides) -> np.ndarray:
    """circuit_unitary with optionally overridden gate matrices (test fixture)."""
    u = np.eye(2**circ.n_qubits, dtype=complex)
    for op in circ.ops:
        m = overrides[op.kind] if overrides and op.kind in overrides else gates.gate_matrix(op)
        u = compiler.embed_unitary(m, op.targets, circ.n_qubits) @ u
    return np.exp(1j * circ.global_phase) * u


def _phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    return float(1.0 - abs(np.trace(u.conj().T @ v)) / u.shape[0])


def verify_suite(gate_overrides: dict | None = None) -> list[CheckResult]:
    """Machine-check the gate and decomposition identities; returns per-check results."""
    rng = np.random.default_rng(20240817)
    checks: list[CheckResult] = []

    # single-qubit identity: U(theta,phi,lam) as phase-gate/Hadamard product
    err = 0.0
    for _ in range(100):
        th, ph, la = rng.uniform(-2 * np.pi, 2 * np.pi, 3)
        lhs = gates.u3(th, ph, la)
        rhs = (
            np.exp(-1j * th / 2)
            * gates.phase_gate(np.pi / 2 + ph)
            @ gates.hadamard()
            @ gates.phase_gate(th)
            @ gates.hadamard()
            @ gates.phase_gate(-np.pi / 2 + la)
        )
        err = max(err, float(np.max(np.abs(lhs - rhs))))
    checks.append(CheckResult("u3 = phase/hadamard product (elementwise)", err, 1e-12))

    # axis-rotation synthesis of u3 with an Rx core (z angles carry +-pi/2 shifts)
    err = 0.0
    for _ in range(100):
        th, ph, la = rng.uniform(-2 * np.pi, 2 * np.pi, 3)
        lhs = gates.u3(th, ph, la)
        rhs = (
            gates.rotation("z", ph + np.pi / 2)
            @ gates.rotation("x", th)
            @ gates.rotation("z", la - np.pi / 2)
        )
        err = max(err, _phase_distance(lhs, rhs))
    checks.append(CheckResult("u3 = Rz Rx Rz synthesis (up to phase)", err, 1e-12))

    # reference-frame changes
    ry = gates.rotation("y", np.pi / 2)
    rx = gates.rotation("x", np.pi / 2)
    z = gates.PAULI["Z"]
    err = float(np.max(np.abs(ry @ z @ ry.conj().T - gates.PAULI["X"])))
    err = max(err, float(np.max(np.abs(rx @ z @ rx.conj().T + gates.PAULI["Y"]))))
    checks.append(CheckResult("frame changes Ry/Rx of sigma_z", err, 1e-12))

    # [sigma_a sigma_a, sigma_b sigma_b] = 0
    err = 0.0
    for a in "XYZ":
        for b in "XYZ":
            ma = np.kron(gates.PAULI[a], gates.PAULI[a])
            mb = np.kron(gates.PAULI[b], gates.PAULI[b])
            err = max(err, float(np.max(np.abs(ma @ mb - mb @ ma))))
    checks.append(CheckResult("pair-exponential generators commute", err, 1e-12))

    # gate unitarity
    err = 0.0
    sample_ops = [
        gates.GateOp("U3", tuple(rng.uniform(-3, 3, 3)), (1,)),
        gates.GateOp("H", (), (1,)),
        gates.GateOp("Phase", (0.7,), (1,)),
        gates.GateOp("Rx", (1.1,), (1,)),
        gates.GateOp("CNOT", (), (1, 2)),
        gates.GateOp("CPhase", (0.9,), (1, 2)),
        gates.GateOp("Uxy", (0.4,), (1, 2)),
        gates.GateOp("MS_T4", (0.3, 0.2), (1, 2, 3)),
    ]
    for op in sample_ops:
        m = gates.gate_matrix(op)
        err = max(err, float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))))
    checks.append(CheckResult("gate matrices unitary", err, 1e-10))

    # pair decomposition soundness: 9 axis pairs x 4 sets x random angles
    err = 0.0
    for alpha in "xyz":
        for beta in "xyz":
            for gs in GateSet:
                for d in rng.uniform(-np.pi, np.pi, 6):
                    circ = compiler.decompose_pauli_pair(alpha, beta, float(d), (1, 2), gs)
                    u = _unitary_with(circ, gate_overrides)
                    target = gates.pauli_pair_exponential(alpha, beta, float(d))
                    err = max(err, _phase_distance(u, target))
    checks.append(CheckResult("pair decompositions vs exp(-i d ss) (all sets)", err, 1e-10))

    # heisenberg variants + gate-count contracts
    err = 0.0
    count_err = 0.0
    for d in rng.uniform(-np.pi, np.pi, 6):
        target = gates.hermitian_expm(
            float(d) * sum(np.kron(gates.PAULI[a], gates.PAULI[a]) for a in "XYZ")
        )
        for variant, kind, count in (
            ("6cnot", "CNOT", 6), ("3cnot", "CNOT", 3), ("3uxy", "Uxy", 3), ("s4", None, None)
        ):
            circ = compiler.heisenberg2_circuit(float(d), (1, 2), variant)
            err = max(err, _phase_distance(_unitary_with(circ, gate_overrides), target))
            if kind is not None and circ.two_qubit_count(kind) != count:
                count_err = 1.0
    checks.append(CheckResult("heisenberg variants vs dense bond exponential", err, 1e-10))
    checks.append(CheckResult("two-qubit gate counts 6/3/3", count_err, 0.0))

    # S3 single- vs two-CPhase forms
    err = 0.0
    for d in rng.uniform(0.05, np.pi, 6):
        single = compiler.decompose_pauli_pair("z", "z", float(d), (1, 2), GateSet.S3)
        double = compiler.decompose_pauli_pair(
            "z", "z", float(d), (1, 2), GateSet.S3, s3_phase_floor=2 * np.pi
        )
        err = max(
            err,
            _phase_distance(
                _unitary_with(single, gate_overrides), _unitary_with(double, gate_overrides)
            ),
        )
    checks.append(CheckResult("S3 one-CPhase and two-CPhase forms agree", err, 1e-10))

    # multi-qubit ladder, all 27 axis triples
    err = 0.0
    for a1 in "xyz":
        for a2 in "xyz":
            for a3 in "xyz":
                for d in rng.uniform(-np.pi, np.pi, 2):
                    circ = compiler.decompose_multi_pauli([a1, a2, a3], float(d), (1, 2, 3))
                    gen = np.eye(1, dtype=complex)
                    for a in (a1, a2, a3):
                        gen = np.kron(gen, gates.PAULI[a.upper()])
                    target = gates.hermitian_expm(float(d) * gen)
                    err = max(err, _phase_distance(_unitary_with(circ, gate_overrides), target))
    checks.append(CheckResult("3-qubit ladder vs dense exponential (27 triples)", err, 1e-10))
    return checks


def format_verify_report(checks: list[CheckResult]) -> str:
    lines = []
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        lines.append(f"[{status}] {c.name}: max error {c.max_error:.3e} (tol {c.tol:.0e})")
    n_fail = sum(1 for c in checks if not c.passed)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines)
