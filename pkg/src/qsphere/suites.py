"""
Verification suites behind ``qsphere verify``.

Every suite is a generator of (check name, thunk) pairs. The runner executes the thunks in
order, so the report is deterministic for a given RunConfig and seed. A library error
raised by a thunk becomes a failed check instead of aborting the run.
"""

from __future__ import annotations

import math
import random
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial

from core.config import RunConfig
from core.logger import run_context, setup_logger
from qsphere import cocycle, corep, fodc, spectral
from qsphere.coordalg import (
    CoordElement,
    apply_to_slot,
    coord_antipode,
    coord_coproduct,
    coord_counit,
    coord_star,
    counit_slot,
    gen,
    iter_monomials,
    localize,
    multiply_out,
    one,
)
from qsphere.errors import NonConvergence, NotInSubalgebra, QSphereError
from qsphere.expr import parse, parse_expression, render
from qsphere.haar import haar, haar_podles, inner, is_positive_at
from qsphere.podles import (
    CROSS_RELATION_PAIRS,
    PodlesElement,
    PodlesMonomial,
    embed,
    is_in_podles,
    pod_gen,
    pod_one,
    pod_star,
    cross_relation_table_check,
    podles_coproduct_check,
    recognize,
    sigma,
    sigma_inverse,
)
from qsphere.qscalar import EXACT, RationalQ, lam, normalize, parse_rational_q, qint
from qsphere.reports import CheckResult, count_check, exact_check, failure_check, numeric_check
from qsphere.tensor import Tensor
from qsphere.uq import (
    UqElement,
    UqMonomial,
    act_left,
    act_right,
    cross_relation_check,
    pair,
    pair_tensor,
    r_action,
    r_e,
    uq_antipode,
    uq_coproduct,
    uq_counit,
    uq_gen,
    uq_one,
    uq_star,
)

logger = setup_logger("SUITES")

Thunk = Callable[[], CheckResult | list[CheckResult]]
SuiteFn = Callable[[RunConfig, random.Random], Iterator[tuple[str, Thunk]]]

SPECTRAL_Q0 = (Fraction(3, 10), Fraction(1, 2), Fraction(7, 10))
EIGEN_CUTOFF = 12
STABILIZATION_CUTOFFS = (10, 14)
HAAR_TRACE_CASES = (("1", 3), ("A", 3), ("A^2", 3), ("1", 4), ("A", 4), ("A^2", 4))
TAU_TRACE_CASES = (("Bs", "A", "B"), ("A", "A", "A"), ("B", "Bs", "A"))


# ==========================================
# Samplers
# ==========================================


def _unit_coefficient(rng: random.Random) -> RationalQ:
    value = rng.choice((EXACT.one, EXACT.qpow(2), EXACT.qpow(-2)))
    return value if rng.random() < 0.5 else -value


def random_rational_q(rng: random.Random) -> RationalQ:
    """(Σ c_i q^{e_i}) / (1 + c q^e) with small integers; the denominator never vanishes."""
    num = sum((RationalQ(rng.randint(-3, 3)) * EXACT.qpow(2 * rng.randint(-3, 3)) for _ in range(3)), EXACT.zero)
    den = EXACT.one + RationalQ(rng.randint(1, 3)) * EXACT.qpow(2 * rng.randint(1, 3))
    return num / den


_MONOMIALS: dict[int, list] = {}


def random_coord_element(rng: random.Random, max_degree: int = 3, terms: int = 2) -> CoordElement:
    pool = _MONOMIALS.setdefault(max_degree, list(iter_monomials(max_degree)))
    total = CoordElement(None, EXACT)
    for _ in range(terms):
        total = total + CoordElement({rng.choice(pool): _unit_coefficient(rng)}, EXACT)
    return total


def _property(
    name: str, suite: str, samples: int, trial: Callable[[], tuple[bool, dict[str, str]]]
) -> CheckResult:
    """Run ``trial`` ``samples`` times; the first failing inputs are kept for the report."""
    held = 0
    first_failure: dict[str, str] = {}
    for _ in range(samples):
        ok, inputs = trial()
        if ok:
            held += 1
        elif not first_failure:
            first_failure = inputs
    detail = "" if not first_failure else "first failure recorded in inputs"
    return count_check(name, suite, held, samples, inputs=first_failure, detail=detail)


# ==========================================
# scalar
# ==========================================


def scalar_suite(config: RunConfig, rng: random.Random) -> Iterator[tuple[str, Thunk]]:
    suite = "scalar"
    q = EXACT.qpow(2)
    qi = EXACT.qpow(-2)

    yield "qint_zero", lambda: exact_check("qint_zero", suite, qint(0), EXACT.zero)
    yield "qint_two", lambda: exact_check("qint_two", suite, qint(2), q + qi)
    yield "qint_negative", lambda: exact_check("qint_negative", suite, qint(-3), -qint(3))
    yield "qint_three_at_half", lambda: numeric_check(
        "qint_three_at_half", suite, qint(3).evaluate(Fraction(1, 2), 64), 5.25, 1e-15
    )

    def qint_lambda() -> CheckResult:
        held = sum(1 for n in range(1, 31) if qint(n) * lam() == EXACT.qpow(2 * n) - EXACT.qpow(-2 * n))
        return count_check("qint_times_lambda", suite, held, 30, inputs={"n": "1..30"})

    yield "qint_times_lambda", qint_lambda
    yield "normalize_quotient", lambda: exact_check(
        "normalize_quotient", suite, normalize((q * q - 1) / (q - 1)), q + 1
    )
    yield "normalize_zero", lambda: exact_check("normalize_zero", suite, normalize(EXACT.zero / q**3), EXACT.zero)
    yield "eval_qint_two", lambda: numeric_check(
        "eval_qint_two", suite, qint(2).evaluate(Fraction(1, 2), 64), 2.5, 1e-15
    )
    yield "eval_haar_A", lambda: numeric_check(
        "eval_haar_A", suite, ((1 - q * q) / (1 - q**4)).evaluate(Fraction(1, 2), 64), 0.8, 1e-15
    )
    yield "eval_lambda", lambda: numeric_check("eval_lambda", suite, lam().evaluate(Fraction(1, 2), 64), -1.5, 1e-15)

    def field_axioms() -> tuple[bool, dict[str, str]]:
        x, y, z = (random_rational_q(rng) for _ in range(3))
        ok = (x + y) + z == x + (y + z) and (x * y) * z == x * (y * z) and x * (y + z) == x * y + x * z
        return ok, {"x": x.render(), "y": y.render(), "z": z.render()}

    yield "field_axioms", lambda: _property("field_axioms", suite, config.samples, field_axioms)

    def eval_normalize() -> tuple[bool, dict[str, str]]:
        x = random_rational_q(rng)
        try:
            a, b = x.evaluate(config.q0, 80), normalize(x).evaluate(config.q0, 80)
        except QSphereError:
            return True, {}
        return abs(a - b) <= 1e-20 * max(1, abs(a)), {"x": x.render()}

    yield "eval_normalize", lambda: _property("eval_normalize", suite, config.samples, eval_normalize)

    def text_round_trip() -> tuple[bool, dict[str, str]]:
        x = random_rational_q(rng)
        return parse_rational_q(x.render()) == x, {"x": x.render()}

    yield "render_round_trip", lambda: _property("render_round_trip", suite, config.samples, text_round_trip)

    def parser_round_trip() -> tuple[bool, dict[str, str]]:
        text = random_expression_text(rng)
        tree = parse(text)
        return parse(render(tree)) == tree, {"expr": text}

    yield "parser_round_trip", lambda: _property("parser_round_trip", suite, 100, parser_round_trip)


def random_expression_text(rng: random.Random, depth: int = 3) -> str:
    """Random text in the CLI grammar over coordinate and scalar tokens."""
    if depth == 0 or rng.random() < 0.3:
        atom = rng.choice(("a", "b", "c", "d", "q", "qinv", str(rng.randint(1, 9))))
        if rng.random() < 0.3:
            return f"{atom}^{rng.randint(0, 3)}"
        return atom
    shape = rng.randrange(3)
    left = random_expression_text(rng, depth - 1)
    right = random_expression_text(rng, depth - 1)
    if shape == 0:
        return f"{left} {rng.choice('+-')} {right}"
    if shape == 1:
        return f"{left}*{right}"
    return f"({left})^{rng.randint(1, 2)}"


# ==========================================
# coordalg
# ==========================================


def coordalg_suite(config: RunConfig, rng: random.Random) -> Iterator[tuple[str, Thunk]]:
    suite = "coordalg"
    q, qi = EXACT.qpow(2), EXACT.qpow(-2)
    a, b, c, d = (gen(n) for n in "abcd")
    A, B, Bs = (embed(pod_gen(n)) for n in ("A", "B", "Bs"))
    bc = b * c

    yield "convention_BsB", lambda: exact_check("convention_BsB", suite, Bs * B, A - A * A)
    yield "convention_BBs", lambda: exact_check(
        "convention_BBs", suite, B * Bs, A.scale(q * q) - (A * A).scale(q**4)
    )
    yield "product_da", lambda: exact_check("product_da", suite, d * a, one() + bc.scale(qi))
    yield "product_ba", lambda: exact_check("product_ba", suite, b * a, (a * b).scale(qi))
    yield "counit_a", lambda: exact_check("counit_a", suite, coord_counit(a), EXACT.one)
    yield "counit_b", lambda: exact_check("counit_b", suite, coord_counit(b), EXACT.zero)
    yield "star_A", lambda: exact_check("star_A", suite, coord_star(A), A)
    yield "star_generators", lambda: exact_check(
        "star_generators",
        suite,
        (coord_star(a), coord_star(b), coord_star(c), coord_star(d)) == (d, c.scale(-q), b.scale(-qi), a),
        True,
    )

    def coproducts() -> CheckResult:
        results = podles_coproduct_check(EXACT)
        return count_check("podles_coproducts", suite, sum(results.values()), len(results), inputs=results)

    yield "podles_coproducts", coproducts
    binv, cinv = gen("binv"), gen("cinv")
    yield "localized_b_inverse", lambda: exact_check("localized_b_inverse", suite, b * binv, localize(one()))
    yield "localized_c_inverse", lambda: exact_check("localized_c_inverse", suite, c * cinv, localize(one()))
    yield "localized_a_binv", lambda: exact_check("localized_a_binv", suite, a * binv, (binv * a).scale(qi))

    def confluence() -> tuple[bool, dict[str, str]]:
        letters = [rng.choice("abcd") for _ in range(rng.randint(2, 5))]
        word = [gen(x) for x in letters]
        left = word[0]
        for x in word[1:]:
            left = left * x
        right = word[-1]
        for x in reversed(word[:-1]):
            right = x * right
        cut = rng.randint(1, len(word) - 1)
        head, tail = one(), one()
        for x in word[:cut]:
            head = head * x
        for x in word[cut:]:
            tail = tail * x
        return left == right == head * tail, {"word": "*".join(letters)}

    yield "rewriting_confluence", lambda: _property("rewriting_confluence", suite, config.samples, confluence)

    def hopf_axioms() -> tuple[bool, dict[str, str]]:
        x = random_coord_element(rng, 3)
        y = random_coord_element(rng, 2)
        delta = coord_coproduct(x, 2)
        counit_ok = counit_slot(delta, 0) == x and counit_slot(delta, 1) == x
        antipode_ok = multiply_out(apply_to_slot(delta, 0, coord_antipode)) == one().scale(coord_counit(x))
        multiplicative = coord_coproduct(x * y, 2) == delta * coord_coproduct(y, 2)
        return counit_ok and antipode_ok and multiplicative, {"x": x.render(), "y": y.render()}

    yield "hopf_axioms", lambda: _property("hopf_axioms", suite, config.samples, hopf_axioms)

    def star_laws() -> tuple[bool, dict[str, str]]:
        x, y = random_coord_element(rng, 3), random_coord_element(rng, 2)
        ok = coord_star(x * y) == coord_star(y) * coord_star(x) and coord_star(coord_star(x)) == x
        return ok, {"x": x.render(), "y": y.render()}

    yield "star_antihomomorphism", lambda: _property("star_antihomomorphism", suite, config.samples, star_laws)

    def localization_embeds() -> tuple[bool, dict[str, str]]:
        x, y = random_coord_element(rng, 3), random_coord_element(rng, 3)
        return localize(x) * localize(y) == localize(x * y), {"x": x.render(), "y": y.render()}

    yield "localization_embedding", lambda: _property(
        "localization_embedding", suite, config.samples, localization_embeds
    )


# ==========================================
# uq
# ==========================================


def _antipode_convolution(f: UqElement) -> UqElement:
    """m(S ⊗ id)Δ(f)."""
    total = UqElement(None, f.field)
    for (m1, m2), coeff in uq_coproduct(f, 2).items():
        left = uq_antipode(UqElement.from_monomial(m1, f.field))
        total = total + (left * UqElement.from_monomial(m2, f.field)).scale(coeff)
    return total


def _random_uq(rng: random.Random) -> UqElement:
    total = UqElement(None, EXACT)
    for _ in range(2):
        mono = UqMonomial(rng.randint(0, 2), rng.randint(-2, 2), rng.randint(0, 2))
        total = total + UqElement.from_monomial(mono).scale(_unit_coefficient(rng))
    return total


def uq_suite(config: RunConfig, rng: random.Random) -> Iterator[tuple[str, Thunk]]:
    suite = "uq"
    q, qi = EXACT.qpow(2), EXACT.qpow(-2)
    E, F, K, Kinv = (uq_gen(n) for n in ("E", "F", "K", "Kinv"))
    a, b, c, d = (gen(n) for n in "abcd")
    B = embed(pod_gen("B"))

    yield "relation_EF", lambda: exact_check(
        "relation_EF", suite, E * F, F * E + (K * K - Kinv * Kinv).scale(EXACT.one / lam())
    )
    yield "relation_KE", lambda: exact_check("relation_KE", suite, K * E, (E * K).scale(q))
    yield "relation_KKinv", lambda: exact_check("relation_KKinv", suite, K * Kinv, uq_one())
    yield "coproduct_E", lambda: exact_check(
        "coproduct_E", suite, uq_coproduct(E, 2), Tensor.pure(E, K) + Tensor.pure(Kinv, E)
    )
    yield "antipode_E", lambda: exact_check("antipode_E", suite, uq_antipode(E), E.scale(-q))
    yield "antipode_inverse_E", lambda: exact_check("antipode_inverse_E", suite, uq_antipode(E, True), E.scale(-qi))
    yield "star_E", lambda: exact_check("star_E", suite, uq_star(E), F)
    yield "pair_E_c", lambda: exact_check("pair_E_c", suite, pair(E, c), EXACT.one)
    yield "pair_K_d", lambda: exact_check("pair_K_d", suite, pair(K, d), EXACT.qpow(1))
    yield "pair_E_a", lambda: exact_check("pair_E_a", suite, pair(E, a), EXACT.zero)
    yield "act_left_E_a", lambda: exact_check("act_left_E_a", suite, act_left(E, a), b)
    yield "act_right_c_E", lambda: exact_check("act_right_c_E", suite, act_right(c, E), a)
    yield "r_action_E_B", lambda: exact_check(
        "r_action_E_B", suite, r_action(E, B), (a * a).scale(-EXACT.qpow(-1))
    )

    def hopf_laws() -> tuple[bool, dict[str, str]]:
        f = _random_uq(rng)
        ok = _antipode_convolution(f) == uq_one().scale(uq_counit(f))
        ok = ok and uq_antipode(uq_antipode(f, inverse=True)) == f
        return ok, {"f": f.render()}

    yield "antipode_convolution", lambda: _property("antipode_convolution", suite, config.samples, hopf_laws)

    def hopf_pairing() -> tuple[bool, dict[str, str]]:
        f, g = _random_uq(rng), _random_uq(rng)
        x, y = random_coord_element(rng, 2), random_coord_element(rng, 2)
        first = pair(f * g, x) == pair_tensor(Tensor.pure(f, g), coord_coproduct(x, 2))
        second = pair(f, x * y) == pair_tensor(uq_coproduct(f, 2), Tensor.pure(x, y))
        return first and second, {"f": f.render(), "g": g.render(), "x": x.render(), "y": y.render()}

    yield "hopf_pairing", lambda: _property("hopf_pairing", suite, config.samples, hopf_pairing)

    def action_star() -> tuple[bool, dict[str, str]]:
        f, x = _random_uq(rng), random_coord_element(rng, 3)
        g = uq_star(uq_antipode(f))
        ok = coord_star(act_left(f, x)) == act_left(g, coord_star(x))
        ok = ok and coord_star(act_right(x, f)) == act_right(coord_star(x), g)
        return ok, {"f": f.render(), "x": x.render()}

    yield "action_star", lambda: _property("action_star", suite, config.samples, action_star)

    def star_representation() -> tuple[bool, dict[str, str]]:
        f = rng.choice((E, F, K))
        x, y = random_coord_element(rng, 3), random_coord_element(rng, 3)
        ok = inner(x, r_action(f, y)) == inner(r_action(uq_star(f), x), y)
        return ok, {"f": f.render(), "x": x.render(), "y": y.render()}

    yield "r_star_representation", lambda: _property(
        "r_star_representation", suite, config.samples, star_representation
    )

    def actions_commute() -> tuple[bool, dict[str, str]]:
        f, g, x = _random_uq(rng), _random_uq(rng), random_coord_element(rng, 3)
        ok = act_left(f, act_right(x, g)) == act_right(act_left(f, x), g)
        return ok, {"f": f.render(), "g": g.render(), "x": x.render()}

    yield "left_right_commute", lambda: _property("left_right_commute", suite, config.samples, actions_commute)

    def cross_relations() -> CheckResult:
        vplus, vminus = corep.vplus_vminus_basis(Fraction(3, 2))
        vectors = [v.elem for v in (*vplus, *vminus)]
        cases = [(f, x, v) for f in (E, F, K) for x in ("A", "B", "Bs") for v in vectors]
        held = sum(cross_relation_check(f, embed(pod_gen(x)), v) for f, x, v in cases)
        return count_check("cross_relations", suite, held, len(cases), inputs={"l_max": "3/2"})

    yield "cross_relations", cross_relations


# ==========================================
# podles
# ==========================================


def podles_suite(config: RunConfig, rng: random.Random) -> Iterator[tuple[str, Thunk]]:
    suite = "podles"
    q = EXACT.qpow(2)
    A, B, Bs = (pod_gen(n) for n in ("A", "B", "Bs"))
    b, c = gen("b"), gen("c")

    yield "relation_BA", lambda: exact_check("relation_BA", suite, B * A, (A * B).scale(q * q))
    yield "relation_BsB", lambda: exact_check("relation_BsB", suite, Bs * B, A - A * A)
    yield "relation_BBs", lambda: exact_check(
        "relation_BBs", suite, B * Bs, A.scale(q * q) - (A * A).scale(q**4)
    )
    yield "embed_A", lambda: exact_check("embed_A", suite, embed(A), (b * c).scale(-EXACT.qpow(-2)))
    yield "embed_one", lambda: exact_check("embed_one", suite, embed(pod_one()), one())
    yield "embed_BsB", lambda: exact_check("embed_BsB", suite, embed(Bs * B), embed(A - A * A))
    yield "recognize_A", lambda: exact_check("recognize_A", suite, recognize((b * c).scale(-EXACT.qpow(-2))), A)

    def recognize_a() -> CheckResult:
        try:
            recognize(gen("a"))
        except NotInSubalgebra as exc:
            return exact_check("recognize_rejects_a", suite, exc.error_code, "NOT_IN_SUBALGEBRA")
        return exact_check("recognize_rejects_a", suite, "recognized", "NOT_IN_SUBALGEBRA")

    yield "recognize_rejects_a", recognize_a
    yield "recognize_RF_RE", lambda: exact_check(
        "recognize_RF_RE",
        suite,
        is_in_podles(fodc.podles_r("F", B) * fodc.podles_r("E", Bs)),
        True,
    )
    yield "sigma_B", lambda: exact_check("sigma_B", suite, sigma(B), B.scale(q * q))
    yield "sigma_Bs", lambda: exact_check("sigma_Bs", suite, sigma(Bs), Bs.scale(q**-2))
    yield "sigma_A_cubed", lambda: exact_check("sigma_A_cubed", suite, sigma(A**3), A**3)

    def round_trip() -> tuple[bool, dict[str, str]]:
        x = cocycle.random_element(rng, 3, EXACT, max_exp=3)
        y = cocycle.random_element(rng, 2, EXACT, max_exp=2)
        ok = recognize(embed(x)) == x and embed(x * y) == embed(x) * embed(y)
        ok = ok and sigma_inverse(sigma(x)) == x and embed(pod_star(x)) == coord_star(embed(x))
        return ok, {"x": x.render(), "y": y.render()}

    yield "embed_recognize", lambda: _property("embed_recognize", suite, config.samples, round_trip)

    kinv2 = uq_gen("Kinv") * uq_gen("Kinv")

    def sigma_is_kinv2() -> tuple[bool, dict[str, str]]:
        x = cocycle.random_element(rng, 3, EXACT)
        return recognize(act_left(kinv2, embed(x))) == sigma(x), {"x": x.render()}

    yield "sigma_left_action", lambda: _property("sigma_left_action", suite, config.samples, sigma_is_kinv2)

    def action_stable() -> tuple[bool, dict[str, str]]:
        x = cocycle.random_element(rng, 2, EXACT)
        ok = all(is_in_podles(act_left(uq_gen(f), embed(x))) for f in ("E", "F", "K"))
        return ok, {"x": x.render()}

    yield "left_action_stable", lambda: _property("left_action_stable", suite, config.samples, action_stable)

    def cross_relation_table() -> tuple[bool, dict[str, str]]:
        v = random_coord_element(rng)
        failed = [f"{f}{x}" for f, x in CROSS_RELATION_PAIRS if not cross_relation_table_check(f, x, v)]
        return not failed, {"v": v.render(), "failed": ",".join(failed)}

    yield "cross_relation_table", lambda: _property(
        "cross_relation_table", suite, config.samples, cross_relation_table
    )

    def basis_independent() -> CheckResult:
        basis = [
            PodlesElement.from_monomial(PodlesMonomial(i, s))
            for i in range(7)
            for s in range(-6, 7)
            if i + abs(s) <= 6
        ]
        images = {next(iter(embed(x).terms)) for x in basis}
        return count_check("embed_injective", suite, len(images), len(basis), inputs={"degree": 6})

    yield "embed_injective", basis_independent


# ==========================================
# haar
# ==========================================


def haar_suite(config: RunConfig, rng: random.Random) -> Iterator[tuple[str, Thunk]]:
    suite = "haar"
    q = EXACT.qpow(2)
    A = pod_gen("A")
    a, b = gen("a"), gen("b")

    yield "haar_one", lambda: exact_check("haar_one", suite, haar(one()), EXACT.one)
    yield "haar_a", lambda: exact_check("haar_a", suite, haar(a), EXACT.zero)
    yield "inner_one", lambda: exact_check("inner_one", suite, inner(one(), one()), EXACT.one)
    yield "inner_a_b", lambda: exact_check("inner_a_b", suite, inner(a, b), EXACT.zero)

    def powers_of_A() -> CheckResult:
        held = sum(
            1 for j in range(1, 11) if haar_podles(A**j) == (1 - q * q) / (1 - q ** (2 * j + 2))
        )
        return count_check("haar_A_powers", suite, held, 10, inputs={"j": "1..10"})

    yield "haar_A_powers", powers_of_A
    generators = [uq_gen(n) for n in ("E", "F", "K", "Kinv")]

    def invariance() -> tuple[bool, dict[str, str]]:
        x = random_coord_element(rng, 5, 3)
        f = rng.choice(generators)
        eps = uq_counit(f)
        ok = haar(act_left(f, x)) == eps * haar(x) and haar(act_right(x, f)) == eps * haar(x)
        return ok, {"f": f.render(), "x": x.render()}

    yield "invariance", lambda: _property("invariance", suite, config.samples, invariance)
    kinv2 = uq_gen("Kinv") * uq_gen("Kinv")

    def modular() -> tuple[bool, dict[str, str]]:
        x, y = random_coord_element(rng, 3), random_coord_element(rng, 3)
        twisted = act_right(act_left(kinv2, y), kinv2)
        return haar(x * y) == haar(twisted * x), {"x": x.render(), "y": y.render()}

    yield "modular_property", lambda: _property("modular_property", suite, config.samples, modular)

    def twisted_trace() -> tuple[bool, dict[str, str]]:
        x, y = cocycle.random_element(rng), cocycle.random_element(rng)
        return haar_podles(x * y) == haar_podles(sigma(y) * x), {"x": x.render(), "y": y.render()}

    yield "twisted_trace", lambda: _property("twisted_trace", suite, config.samples, twisted_trace)

    def rf_re_swap() -> tuple[bool, dict[str, str]]:
        x, y = cocycle.random_element(rng), cocycle.random_element(rng)
        lhs = haar(fodc.podles_r("F", x) * fodc.podles_r("E", y))
        rhs = q * q * haar(fodc.podles_r("E", x) * fodc.podles_r("F", y))
        return lhs == rhs, {"x": x.render(), "y": y.render()}

    yield "haar_RF_RE_swap", lambda: _property("haar_RF_RE_swap", suite, config.samples, rf_re_swap)

    def positivity() -> tuple[bool, dict[str, str]]:
        x = random_coord_element(rng, 3, 3)
        return is_positive_at(x, config.q0), {"x": x.render(), "q0": str(config.q0)}

    yield "inner_positive", lambda: _property("inner_positive", suite, config.samples, positivity)


# ==========================================
# corep
# ==========================================


def corep_suite(config: RunConfig, rng: random.Random) -> Iterator[tuple[str, Thunk]]:
    suite = "corep"
    l_max = Fraction(7, 2)
    a = gen("a")

    def family() -> corep.LadderFamily:
        return corep.build_ladder(l_max)

    def seed() -> CheckResult:
        w = family().get(Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2))
        return exact_check("ladder_seed", suite, (w.elem, w.norm2) == (a, inner(a, a)), True)

    yield "ladder_seed", seed

    def defects(name: str, found: list) -> CheckResult:
        return exact_check(name, suite, len(found), 0, inputs={"l_max": str(l_max)}, detail=str(found[:5]))

    yield "orthogonality", lambda: defects("orthogonality", corep.orthogonality_defects(family()))
    yield "weights", lambda: defects("weights", corep.weight_defects(family()))
    yield "norm2_consistency", lambda: defects("norm2_consistency", corep.norm_defects(family()))

    def lowering() -> CheckResult:
        levels = [Fraction(2 * m + 1, 2) for m in range(4)]
        held = sum(corep.lowering_check(family(), lvl) for lvl in levels)
        return count_check("lowering_eigen", suite, held, len(levels), inputs={"l": "1/2..7/2"})

    yield "lowering_eigen", lowering

    def bottom_of_ladder() -> CheckResult:
        fam = family()
        bottoms = [v for v in fam if v.j == -v.l]
        held = sum(1 for v in bottoms if r_e(v.elem).is_zero())
        return count_check("bottom_annihilated", suite, held, len(bottoms))

    yield "bottom_annihilated", bottom_of_ladder

    def v_membership() -> CheckResult:
        vplus, vminus = corep.vplus_vminus_basis(Fraction(5, 2))
        held = 0
        for sign, row in ((1, vplus), (-1, vminus)):
            for v in row:
                x, y = corep.row_decomposition(v.elem, sign)
                left, right = ("c", "d") if sign > 0 else ("a", "b")
                held += (embed(x) * gen(left) + embed(y) * gen(right)) == v.elem
        return count_check("row_decomposition", suite, held, len(vplus) + len(vminus))

    yield "row_decomposition", v_membership

    def stability() -> CheckResult:
        vplus, _ = corep.vplus_vminus_basis(Fraction(5, 2))
        A = embed(pod_gen("A"))
        E = uq_gen("E")
        held = sum(
            1
            for v in vplus
            if all(m.right_weight == 1 for m in (A * v.elem).terms)
            and all(m.right_weight == 1 for m in act_left(E, v.elem).terms)
        )
        return count_check("vplus_stable", suite, held, len(vplus))

    yield "vplus_stable", stability

    def identity_matrix() -> CheckResult:
        m = corep.mult_matrix(pod_one(), "V+", "V+", Fraction(5, 2))
        ok = all(
            m.entries[r][col] == (EXACT.one if r == col else EXACT.zero)
            for col in range(len(m.cols))
            if m.trusted[col]
            for r in range(len(m.rows))
        )
        return exact_check("mult_identity", suite, ok, True)

    yield "mult_identity", identity_matrix

    def banded() -> CheckResult:
        m = corep.mult_matrix(pod_gen("A"), "V+", "V+", Fraction(7, 2))
        ok = all(
            EXACT.is_zero(m.entries[r][col]) or abs(m.rows[r][0] - m.cols[col][0]) <= 1
            for r in range(len(m.rows))
            for col in range(len(m.cols))
        )
        return exact_check("mult_A_banded", suite, ok, True)

    yield "mult_A_banded", banded

    def star_partner() -> CheckResult:
        l_top = Fraction(5, 2)
        mb = corep.mult_matrix(pod_gen("B"), "V+", "V+", l_top)
        mbs = corep.mult_matrix(pod_gen("Bs"), "V+", "V+", l_top)
        vplus, _ = corep.vplus_vminus_basis(l_top)
        norms = [v.norm2 for v in vplus]
        cells = [
            (r, col)
            for r in range(len(vplus))
            for col in range(len(vplus))
            if mb.trusted[col] and mbs.trusted[r]
        ]
        held = sum(1 for r, col in cells if mb.entries[r][col] * norms[r] == mbs.entries[col][r] * norms[col])
        return count_check("mult_star_partner", suite, held, len(cells))

    yield "mult_star_partner", star_partner


# ==========================================
# fodc
# ==========================================


def fodc_suite(config: RunConfig, rng: random.Random) -> Iterator[tuple[str, Thunk]]:
    suite = "fodc"
    q, qi = EXACT.qpow(2), EXACT.qpow(-2)
    A, B, Bs = (pod_gen(n) for n in ("A", "B", "Bs"))
    one_p = pod_one()
    a, c, d = gen("a"), gen("c"), gen("d")
    h = haar_podles

    yield "d_one", lambda: exact_check("d_one", suite, fodc.differential(one_p).is_zero(), True)
    yield "dB_ecomp", lambda: exact_check("dB_ecomp", suite, fodc.differential(B).ecomp, -(a * a))
    yield "dA_fcomp", lambda: exact_check("dA_fcomp", suite, fodc.differential(A).fcomp, d * c)
    yield "bimodule_units", lambda: exact_check(
        "bimodule_units",
        suite,
        fodc.lmul(one_p, fodc.differential(B)) == fodc.differential(B)
        and fodc.rmul(fodc.differential(A), one_p) == fodc.differential(A),
        True,
    )
    yield "leibniz_AB", lambda: exact_check("leibniz_AB", suite, fodc.leibniz_check(A, B), True)

    def leibniz() -> tuple[bool, dict[str, str]]:
        x, y = cocycle.random_element(rng), cocycle.random_element(rng)
        return fodc.leibniz_check(x, y), {"x": x.render(), "y": y.render()}

    yield "leibniz", lambda: _property("leibniz", suite, config.samples, leibniz)
    yield "wedge_d_one", lambda: exact_check(
        "wedge_d_one", suite, fodc.wedge_coeff([(one_p, one_p)], [(one_p, B)]).is_zero(), True
    )
    yield "wedge_dBs_dB", lambda: exact_check(
        "wedge_dBs_dB",
        suite,
        embed(fodc.wedge_coeff([(one_p, Bs)], [(one_p, B)])),
        fodc.podles_r("F", Bs) * fodc.podles_r("E", B) - (fodc.podles_r("E", Bs) * fodc.podles_r("F", B)).scale(q * q),
    )
    yield "wedge_dA_dA_routes", lambda: exact_check(
        "wedge_dA_dA_routes",
        suite,
        fodc.wedge_coeff([(one_p, A)], [(one_p, A)]),
        fodc.exterior_derivative([(A, A)]),
    )
    yield "volume_form", lambda: exact_check("volume_form", suite, fodc.volume_check(), one_p)
    yield "t2_pairing", lambda: exact_check("t2_pairing", suite, fodc.t2_pairing_check(), EXACT.one)

    def d_squared() -> CheckResult:
        gens = (A, B, Bs)
        held = sum(fodc.d_squared_check(y, z) for y in gens for z in gens)
        return count_check("d_squared", suite, held, 9)

    yield "d_squared", d_squared

    def centrality() -> tuple[bool, dict[str, str]]:
        y, z, x = (cocycle.random_element(rng, 2, EXACT, 2) for _ in range(3))
        return fodc.centrality_check(y, z, x), {"y": y.render(), "z": z.render(), "x": x.render()}

    yield "volume_central", lambda: _property("volume_central", suite, config.samples, centrality)

    def commutators_on_generators() -> CheckResult:
        held = sum(all(fodc.localized_commutator_check(x)) for x in (A, B, Bs))
        return count_check("localized_commutator_generators", suite, held, 3)

    yield "localized_commutator_generators", commutators_on_generators

    def commutators_random() -> tuple[bool, dict[str, str]]:
        x = cocycle.random_element(rng, 3, EXACT, 2)
        return all(fodc.localized_commutator_check(x)), {"x": x.render()}

    yield "localized_commutator", lambda: _property(
        "localized_commutator", suite, min(config.samples, 50), commutators_random
    )

    def tangent() -> CheckResult:
        terms = [(A, B), (-A, B), (one_p, one_p)]
        zero_form = fodc.one_form(terms).is_zero()
        f_rel, e_rel = fodc.tangent_relations(terms)
        return exact_check("tangent_relations", suite, zero_form and f_rel.is_zero() and e_rel.is_zero(), True)

    yield "tangent_relations", tangent

    # the cocycle τ
    yield "tau_A_A_A", lambda: exact_check(
        "tau_A_A_A",
        suite,
        cocycle.tau(A, A, A),
        (qi * qi - q**4) * h(A**3) - (qi * qi - q * q) * h(A**2),
    )
    yield "tau_one_one", lambda: exact_check("tau_one_one", suite, cocycle.tau(one_p, one_p, B), EXACT.zero)
    yield "tau_eta", lambda: exact_check(
        "tau_eta", suite, cocycle.pair_chain(cocycle.TAU, cocycle.eta()), -EXACT.one
    )
    yield "tau_eta_shortcut", lambda: exact_check(
        "tau_eta_shortcut", suite, cocycle.tau_cyclic_shortcut(), -EXACT.one
    )
    yield "b_sigma_eta", lambda: exact_check(
        "b_sigma_eta",
        suite,
        cocycle.b_sigma_chain(cocycle.eta()),
        Tensor.pure(A, A).scale(2 * (q**4 - qi * qi)),
    )
    yield "lambda_sigma_eta", lambda: exact_check(
        "lambda_sigma_eta", suite, cocycle.lambda_sigma_chain(cocycle.eta()), cocycle.eta()
    )
    bilinear = cocycle.Cochain(2, lambda x, y: h(x * y), "h_xy")
    yield "cyclic_one_cocycle_AA", lambda: exact_check(
        "cyclic_one_cocycle_AA", suite, cocycle.cyclic_one_cocycle_vanishing(bilinear), True
    )

    b_tau = cocycle.b_sigma(cocycle.TAU)
    l_tau = cocycle.lambda_sigma(cocycle.TAU)

    def coboundary() -> tuple[bool, dict[str, str]]:
        xs = [cocycle.random_basis_monomial(rng) for _ in range(4)]
        return EXACT.is_zero(b_tau(*xs)), {f"x{i}": x.render() for i, x in enumerate(xs)}

    yield "tau_cocycle", lambda: _property("tau_cocycle", suite, config.samples, coboundary)

    def cyclic() -> tuple[bool, dict[str, str]]:
        xs = [cocycle.random_basis_monomial(rng) for _ in range(3)]
        return l_tau(*xs) == cocycle.tau(*xs), {f"x{i}": x.render() for i, x in enumerate(xs)}

    yield "tau_cyclic", lambda: _property("tau_cyclic", suite, config.samples, cyclic)

    def omega_h() -> tuple[bool, dict[str, str]]:
        xs = [cocycle.random_basis_monomial(rng, max_exp=2) for _ in range(3)]
        return fodc.tau_omega_h(*xs) == cocycle.tau(*xs), {f"x{i}": x.render() for i, x in enumerate(xs)}

    yield "tau_omega_h", lambda: _property("tau_omega_h", suite, min(config.samples, 100), omega_h)

    def invariance() -> tuple[bool, dict[str, str]]:
        f = uq_gen(rng.choice(("E", "F", "K")))
        chain = cocycle.random_chain(rng, 3, 2)
        lhs = cocycle.pair_chain(cocycle.TAU, cocycle.diagonal_action(f, chain))
        rhs = uq_counit(f) * cocycle.pair_chain(cocycle.TAU, chain)
        return lhs == rhs, {"f": f.render(), "chain": chain.render()}

    yield "tau_invariance", lambda: _property("tau_invariance", suite, min(config.samples, 50), invariance)


# ==========================================
# spectral
# ==========================================


def _spectral_q0s(config: RunConfig) -> tuple[Fraction, ...]:
    return (config.q0, *(q0 for q0 in SPECTRAL_Q0 if q0 != config.q0))


def _zeta_cutoff(q0: Fraction, z: float, tolerance: float) -> int:
    """Smallest L ≥ 40 whose geometric tail is below ``tolerance``."""
    rate = float(q0) ** (z - 2)
    return max(40, math.ceil(math.log(tolerance * (1 - rate)) / math.log(rate)) + 1)


def spectral_suite(config: RunConfig, rng: random.Random) -> Iterator[tuple[str, Thunk]]:
    def podles(text: str) -> PodlesElement:
        return parse_expression(text, "podles")

    A, B, Bs = (pod_gen(n) for n in ("A", "B", "Bs"))
    tol = config.tolerance
    for q0 in _spectral_q0s(config):
        eigen_space = spectral.TruncatedSpace(q0, EIGEN_CUTOFF, config.precision_bits)
        op_space = spectral.TruncatedSpace(q0, config.cutoff, config.precision_bits)
        trace_space = spectral.TruncatedSpace(q0, config.trace_cutoff, config.precision_bits)
        yield "dirac_spectrum", partial(spectral.dirac_spectrum_check, eigen_space, tol("eigen"))
        yield "real_structure", partial(spectral.real_structure_checks, op_space, tol("commutant"))
        for x in (A, B, Bs):
            yield "dirac_commutator_blocks", partial(spectral.dcom_check, x, op_space, tol("operator"))
            yield "opposite_action", partial(spectral.opposite_action_check, x, op_space, tol("commutant"))
        yield "mult_star", partial(spectral.mult_star_check, B, op_space, tol("operator"))
        for f, x in CROSS_RELATION_PAIRS:
            yield "cross_relation", partial(spectral.cross_relation_operator_check, f, x, op_space, tol("operator"))
        for x in (A, B, Bs):
            for y in (A, B, Bs):
                yield "commutant", partial(spectral.commutant_checks, x, y, op_space, tol("commutant"))
        yield "commutant_unit", partial(spectral.commutant_checks, pod_one(), B, op_space, tol("commutant"))
        if q0 == config.q0:
            L1, L2 = STABILIZATION_CUTOFFS
            yield "norm_stabilization", partial(spectral.norm_stabilization, B, L1, L2, q0, tol("stabilization"))
        for text, z in HAAR_TRACE_CASES:
            yield "haar_trace", partial(spectral.haar_trace_check, podles(text), z, trace_space, tol("haar_trace"))
        for texts in TAU_TRACE_CASES:
            x0, x1, x2 = (podles(t) for t in texts)
            yield "tau_trace", partial(spectral.tau_trace_check, x0, x1, x2, 3, trace_space, tol("tau_trace"))
        yield "tau_trace_trivial", partial(
            spectral.tau_trace_check, pod_one(), pod_one(), B, 3, trace_space, tol("tau_trace")
        )
        yield "tau_residue", partial(spectral.tau_residue_check, Bs, A, B, trace_space, tol("residue"))
        yield "zeta_series_vs_merom", partial(
            spectral.zeta_agreement_check, 3, _zeta_cutoff(q0, 3, tol("zeta")), 60, q0, tol("zeta")
        )
        yield "zeta_residue", partial(spectral.residue_check, q0, 1e-4, tol("residue"))


# ==========================================
# Runner
# ==========================================


SUITES: dict[str, SuiteFn] = {
    "scalar": scalar_suite,
    "coordalg": coordalg_suite,
    "uq": uq_suite,
    "podles": podles_suite,
    "haar": haar_suite,
    "corep": corep_suite,
    "fodc": fodc_suite,
    "spectral": spectral_suite,
}


def _guarded(suite: str, name: str, thunk: Thunk) -> list[CheckResult]:
    try:
        outcome = thunk()
    except QSphereError as exc:
        logger.warning(f"{suite}.{name} raised {exc.error_code}: {exc.message}", extra={"check": name})
        return [failure_check(name, suite, exc)]
    except ArithmeticError as exc:
        error = NonConvergence(f"{type(exc).__name__}: {exc}")
        logger.warning(f"{suite}.{name} raised {error.error_code}: {error.message}", extra={"check": name})
        return [failure_check(name, suite, error)]
    return outcome if isinstance(outcome, list) else [outcome]


def run_named_suite(name: str, config: RunConfig) -> list[CheckResult]:
    """One suite with its own RNG seeded from the config, so suites are independent of each other."""
    rng = random.Random(f"{config.seed}:{name}")
    with run_context(suite=name, seed=config.seed):
        logger.info(f"suite {name} started")
        results: list[CheckResult] = []
        for check_name, thunk in SUITES[name](config, rng):
            for result in _guarded(name, check_name, thunk):
                if not result.passed:
                    logger.warning(
                        f"{name}.{result.check} failed: lhs={result.lhs} rhs={result.rhs}",
                        extra={"check": result.check},
                    )
                results.append(result)
        passed = sum(r.passed for r in results)
        logger.info(f"suite {name} finished: {passed}/{len(results)} passed")
        return results


def run_suite(config: RunConfig) -> tuple[int, list[CheckResult]]:
    """
    Run the configured suites; exit code 0 iff every check passed.

    With ``threads`` > 1 the suites go to a pool of that many worker processes. Workers keep
    their own mpmath precision and memo caches, and results are collected in the configured
    suite order, so the report is identical to a sequential run.
    """
    names = list(config.suites)
    workers = min(config.threads, len(names))
    if workers > 1:
        logger.info(f"running {len(names)} suites on {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_suite = list(pool.map(run_named_suite, names, [config] * len(names)))
    else:
        per_suite = [run_named_suite(name, config) for name in names]
    results = [result for suite_results in per_suite for result in suite_results]
    return (0 if all(r.passed for r in results) else 1), results


def suite_names() -> list[str]:
    return list(SUITES)
