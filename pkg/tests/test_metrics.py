import itertools
import math

from dataclasses import replace

import numpy as np
import pytest

from scipy.stats import mannwhitneyu

from conftest import write_wordnet

from wn_align.elicitation import ElicitationRecord, Relation
from wn_align.exceptions import (
    ConfigError,
    DegenerateInputError,
    DegenerateTableError,
    UnknownAnchorError,
)
from wn_align.matcher import ClassifiedTriplet, MatchStatus, Triplet
from wn_align.metrics import (
    CurvePoint,
    WordCategorizer,
    abstract_physical_split,
    cramers_v,
    distance_points,
    distance_summary,
    elicitation_frequency,
    frequency_of,
    gjsd,
    mann_whitney_u,
    match_rate_curve,
    mismatch_matrix,
    polysemy_comparison,
    spearman_rho,
    status_distribution,
    template_association,
    threshold_grid,
    triplet_counts,
)
from wn_align.wn_store import WordNetGraph, parse_wordnet


def mismatched(target, relatum, count, documented, relation=Relation.HYP):
    return ClassifiedTriplet(
        Triplet(target, relation, relatum, count), MatchStatus.mismatched(documented)
    )


def matched(target, relatum, count, relation=Relation.HYP):
    return ClassifiedTriplet(Triplet(target, relation, relatum, count), MatchStatus.matched())


def test_elicitation_frequency_sums_to_one_per_group():
    triplets = [
        Triplet("car", Relation.HYP, "vehicle", 2),
        Triplet("car", Relation.HYP, "machine", 1),
        Triplet("car", Relation.HYP, "wheel", 1),
        Triplet("car", Relation.MER, "wheel", 3),
    ]
    freq = elicitation_frequency(triplets)
    assert freq[("car", Relation.HYP, "vehicle")] == 0.5
    assert freq.of(triplets[1]) == 0.25
    assert freq[("car", Relation.MER, "wheel")] == 1.0
    for values in freq.groups().values():
        assert math.fsum(values.values()) == pytest.approx(1.0)
    assert list(freq.to_frame().columns) == ["target", "relation", "relatum", "frequency"]


def test_frequency_ignores_excluded_triplets(classified):
    freq = frequency_of(classified)
    assert ("tree", Relation.HYP, "plant") not in freq
    assert ("night", Relation.ANT, "day") not in freq
    assert freq[("night", Relation.ANT, "daytime")] == 1.0
    assert freq[("car", Relation.HYP, "vehicle")] == 0.5
    assert freq[("car", Relation.HYP, "motor_vehicle")] == 0.25
    assert freq[("apple", Relation.HYP, "fruit")] == pytest.approx(2 / 3)
    assert len(freq) == 12


@pytest.mark.parametrize(
    ("step", "grid"),
    [(0.3, [0.0, 0.3, 0.6, 0.9, 1.0]), (0.5, [0.0, 0.5, 1.0]), (1, [0.0, 1.0])],
)
def test_threshold_grid(step, grid):
    assert threshold_grid(step) == grid


def test_default_threshold_grid():
    grid = threshold_grid()
    assert len(grid) == 101
    assert (grid[0], grid[1], grid[-1]) == (0.0, 0.01, 1.0)


@pytest.mark.parametrize("step", [0, -0.1, 1.5])
def test_threshold_grid_invalid(step):
    with pytest.raises(ConfigError):
        threshold_grid(step)


def test_match_rate_curve(classified):
    curve = match_rate_curve(
        classified, frequency_of(classified), Relation.HYP, [0.0, 0.3, 0.5, 0.7]
    )
    assert curve == [
        CurvePoint(0.0, pytest.approx(2 / 5), 5),
        CurvePoint(0.3, pytest.approx(1 / 3), 3),
        CurvePoint(0.5, 1.0, 1),
    ]


def test_match_rate_curve_retains_fewer_triplets_as_threshold_grows(classified):
    curve = match_rate_curve(classified, frequency_of(classified), Relation.HYP, threshold_grid())
    retained = [point.n_retained for point in curve]
    assert retained == sorted(retained, reverse=True)
    assert all(0 <= point.match_rate <= 1 for point in curve)


@pytest.mark.parametrize("thresholds", [[0.5, 0.2], [0.2, 0.2], [-0.1, 0.5], [0.5, 1.2]])
def test_match_rate_curve_invalid_thresholds(classified, thresholds):
    with pytest.raises(ConfigError):
        match_rate_curve(classified, frequency_of(classified), Relation.HYP, thresholds)


def scale_counts(classified, factor):
    return [
        replace(c, triplet=replace(c.triplet, count=c.triplet.count * factor)) for c in classified
    ]


@pytest.mark.parametrize("factor", [2, 3, 17])
def test_frequency_and_curve_are_scale_invariant(classified, factor):
    grid = threshold_grid(0.05)
    base, freq = frequency_of(classified), frequency_of(scale_counts(classified, factor))
    assert set(freq) == set(base)
    assert all(freq[key] == pytest.approx(base[key]) for key in base)
    for relation in Relation:
        assert match_rate_curve(scale_counts(classified, factor), freq, relation, grid) == (
            match_rate_curve(classified, base, relation, grid)
        )


def mismatched_mer(target, relatum, count):
    return mismatched(target, relatum, count, Relation.MER)


@pytest.mark.parametrize("seed", range(10))
def test_curve_is_scale_invariant_on_random_triplets(seed):
    rng = np.random.default_rng(seed)
    triplets = [
        (matched if rng.random() < 0.5 else mismatched_mer)(
            f"t{int(rng.integers(4))}", f"v{i}", int(rng.integers(1, 6))
        )
        for i in range(30)
    ]
    factor = int(rng.integers(2, 10))
    grid = threshold_grid()
    expected = match_rate_curve(triplets, frequency_of(triplets), Relation.HYP, grid)
    bigger = scale_counts(triplets, factor)
    assert match_rate_curve(bigger, frequency_of(bigger), Relation.HYP, grid) == expected
    assert expected[0].n_retained == 30

def test_mismatch_matrix(classified):
    matrix = mismatch_matrix(classified, frequency_of(classified))
    assert matrix.likelihood(Relation.MER, Relation.HYP) == 1.0
    assert matrix.mass[(Relation.MER, Relation.HYP)] == 0.25
    assert matrix.is_populated(Relation.HYP)
    for relation in Relation:
        if relation != Relation.HYP:
            assert not matrix.is_populated(relation)
            assert set(matrix.column(relation).values()) == {0.0}
    with pytest.raises(KeyError):
        matrix.likelihood(Relation.HYP, Relation.HYP)


def test_mismatch_matrix_columns_are_stochastic():
    triplets = [
        mismatched("a", "x", 3, Relation.MER),
        mismatched("a", "y", 1, Relation.HOL),
        mismatched("b", "z", 1, Relation.SYN),
        matched("b", "w", 1),
        mismatched("c", "u", 1, Relation.HYP, relation=Relation.SYN),
    ]
    matrix = mismatch_matrix(triplets, frequency_of(triplets))
    assert matrix.likelihood(Relation.MER, Relation.HYP) == pytest.approx(0.5)
    assert matrix.likelihood(Relation.HOL, Relation.HYP) == pytest.approx(1 / 6)
    assert matrix.likelihood(Relation.SYN, Relation.HYP) == pytest.approx(1 / 3)
    assert matrix.likelihood(Relation.HYP, Relation.SYN) == 1.0
    for relation in (Relation.HYP, Relation.SYN):
        assert math.fsum(matrix.column(relation).values()) == pytest.approx(1.0)
    frame = matrix.to_frame()
    assert len(frame) == 30
    assert list(frame.columns) == ["documented", "elicited", "likelihood", "mass"]


def test_mismatch_matrix_is_scale_invariant():
    base = [mismatched("a", "x", 3, Relation.MER), mismatched("a", "y", 1, Relation.HOL)]
    scaled = [mismatched("a", "x", 30, Relation.MER), mismatched("a", "y", 10, Relation.HOL)]
    assert mismatch_matrix(base, frequency_of(base)).cells == pytest.approx(
        mismatch_matrix(scaled, frequency_of(scaled)).cells
    )


def _entropy2(p):
    return -sum(x * math.log2(x) for x in p if x > 0)


@pytest.mark.parametrize(
    "distributions",
    [
        [[0.5, 0.5], [0.0, 1.0]],
        [[0.2, 0.3, 0.5], [0.5, 0.3, 0.2], [1 / 3, 1 / 3, 1 / 3]],
        [[0.1, 0.9], [0.9, 0.1], [0.5, 0.5], [0.0, 1.0]],
    ],
)
def test_gjsd_matches_entropy_definition(distributions):
    k = len(distributions)
    mixture = [sum(column) / k for column in zip(*distributions)]
    expected = (_entropy2(mixture) - sum(map(_entropy2, distributions)) / k) / math.log2(k)
    assert gjsd(distributions) == pytest.approx(expected)


@pytest.mark.parametrize(
    ("distributions", "value"),
    [
        ([[0.25, 0.75], [0.25, 0.75]], 0.0),
        ([[1.0, 0.0], [0.0, 1.0]], 1.0),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1.0),
        ([[0.5, 0.5], [0.0, 1.0]], 0.311278),
    ],
)
def test_gjsd_values(distributions, value):
    assert gjsd(distributions) == pytest.approx(value, abs=1e-6)


@pytest.mark.parametrize(
    "distributions", [[[0.5, 0.5]], [[0.5, 0.6], [0.5, 0.5]], [[1.5, -0.5], [0.5, 0.5]], [0.5]]
)
def test_gjsd_degenerate(distributions):
    with pytest.raises(DegenerateInputError):
        gjsd(distributions)


def _chi2(table):
    table = np.asarray(table, dtype=float)
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / table.sum()
    return float(((table - expected) ** 2 / expected).sum())


@pytest.mark.parametrize(
    "table",
    [[[1, 1], [0, 1]], [[3, 1, 0], [1, 2, 2]], [[4, 0, 1], [0, 3, 1], [2, 2, 2]]],
)
def test_cramers_v_matches_chi_squared(table):
    n = np.asarray(table).sum()
    r, c = np.asarray(table).shape
    expected = math.sqrt(_chi2(table) / (n * (min(r, c) - 1)))
    assert cramers_v(table) == pytest.approx(expected)


@pytest.mark.parametrize(
    ("table", "value"),
    [
        ([[5, 0], [0, 5]], 1.0),
        ([[2, 2], [2, 2]], 0.0),
        ([[1, 1], [0, 1]], 0.5),
        ([[5, 0, 0], [0, 5, 0], [0, 0, 0]], 1.0),
    ],
)
def test_cramers_v_values(table, value):
    assert cramers_v(table) == pytest.approx(value)


@pytest.mark.parametrize("table", [[[1, 2]], [[1, 0], [2, 0]], [[0, 0], [0, 3]], [1, 2]])
def test_cramers_v_degenerate(table):
    with pytest.raises(DegenerateTableError):
        cramers_v(table)


@pytest.mark.parametrize("seed", range(25))
def test_gjsd_matches_entropy_definition_on_random_distributions(seed):
    rng = np.random.default_rng(seed)
    k, support = int(rng.integers(2, 6)), int(rng.integers(2, 8))
    weights = rng.random((k, support)) * (rng.random((k, support)) < 0.7)
    weights[:, 0] += 0.05
    distributions = (weights / weights.sum(axis=1, keepdims=True)).tolist()
    mixture = [sum(column) / k for column in zip(*distributions)]
    expected = (_entropy2(mixture) - sum(map(_entropy2, distributions)) / k) / math.log2(k)
    value = gjsd(distributions)
    assert value == pytest.approx(expected, abs=1e-9)
    assert 0 <= value <= 1
    assert gjsd(distributions[::-1]) == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("seed", range(25))
def test_cramers_v_matches_chi_squared_on_random_tables(seed):
    rng = np.random.default_rng(seed)
    table = rng.integers(0, 6, size=(int(rng.integers(2, 6)), int(rng.integers(2, 6))))
    kept = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
    if min(kept.shape) < 2:
        with pytest.raises(DegenerateTableError):
            cramers_v(table.tolist())
        return
    expected = math.sqrt(_chi2(kept) / (kept.sum() * (min(kept.shape) - 1)))
    value = cramers_v(table.tolist())
    assert value == pytest.approx(expected, abs=1e-9)
    assert 0 <= value <= 1
    assert cramers_v((table * 3).T.tolist()) == pytest.approx(value, abs=1e-9)


def test_template_association():
    rows = [
        ("p1", "HYP-1", "apple", "fruit"),
        ("p2", "HYP-1", "apple", "food"),
        ("p3", "HYP-2", "apple", "fruit"),
        ("p1", "HYP-1", "tree", "plant"),
        ("p1", "SYN-1", "car", "auto"),
        ("p2", "SYN-2", "car", "auto"),
    ]
    records = [
        ElicitationRecord(p, t, Relation.parse(t[:3]), w, 1, v) for p, t, w, v in rows
    ]
    scores = {s.relation: s for s in template_association(records)}
    assert scores[Relation.HYP].n_targets == 1
    assert scores[Relation.HYP].gjsd_mean == pytest.approx(0.311278, abs=1e-6)
    assert scores[Relation.HYP].cramers_v_mean == pytest.approx(0.5)
    # car has two templates but a single relatum.
    assert scores[Relation.SYN].n_targets == 0
    assert scores[Relation.SYN].gjsd_mean is None
    assert scores[Relation.MER].cramers_v_mean is None
    assert len(scores) == 6


@pytest.mark.parametrize(
    ("pairs", "rho"),
    [
        ([(1, 2), (2, 4), (3, 6)], 1.0),
        ([(1, 3), (2, 2), (3, 1)], -1.0),
        ([(1, 1), (2, 1), (3, 2), (4, 2)], 4 / math.sqrt(20)),
        ([(1, 0.667), (1, 0.25), (2, 0.333), (2, 0.5)], 0.0),
    ],
)
def test_spearman_rho(pairs, rho):
    assert spearman_rho(pairs) == pytest.approx(rho, abs=1e-12)


@pytest.mark.parametrize("pairs", [[(1, 2)], [(1, 2), (1, 3), (1, 4)], [(1, 2), (2, 2)]])
def test_spearman_rho_degenerate(pairs):
    with pytest.raises(DegenerateInputError):
        spearman_rho(pairs)


def _average_ranks(values):
    ranks = []
    for value in values:
        below = sum(other < value for other in values)
        tied = sum(other == value for other in values)
        ranks.append(below + (tied + 1) / 2)
    return ranks


def _pearson(x, y):
    mx, my = sum(x) / len(x), sum(y) / len(y)
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    return cov / math.sqrt(sum((a - mx) ** 2 for a in x) * sum((b - my) ** 2 for b in y))


@pytest.mark.parametrize("seed", range(20))
def test_spearman_rho_matches_average_rank_correlation(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 16))
    x = [int(value) for value in rng.integers(0, 4, size=n)]
    y = [float(value) / 2 for value in rng.integers(0, 3, size=n)]
    x[0], x[1], y[0], y[1] = 0, 3, 0.0, 1.0
    expected = _pearson(_average_ranks(x), _average_ranks(y))
    assert spearman_rho(list(zip(x, y))) == pytest.approx(expected, abs=1e-9)


def _brute_force_p_value(a, b):
    pooled = list(a) + list(b)
    n1 = len(a)

    def u_of(sample, rest):
        return sum((x > y) + 0.5 * (x == y) for x in sample for y in rest)

    center = n1 * len(b) / 2
    observed = abs(u_of(a, b) - center)
    extreme = total = 0
    for chosen in itertools.combinations(range(len(pooled)), n1):
        first = [pooled[i] for i in chosen]
        rest = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        total += 1
        extreme += abs(u_of(first, rest) - center) >= observed - 1e-9
    return extreme / total


@pytest.mark.parametrize(
    ("a", "b"),
    [
        ([1, 2, 3], [4, 5, 6]),
        ([0.1, 0.5, 0.5, 0.9], [0.3, 0.5, 0.7]),
        ([3, 1, 4, 1, 5], [9, 2, 6]),
        ([0.2, 0.4], [0.1, 0.3, 0.6, 0.8, 0.9, 1.0]),
    ],
)
def test_mann_whitney_exact(a, b):
    result = mann_whitney_u(a, b)
    u = sum((x > y) + 0.5 * (x == y) for x in a for y in b)
    assert result.u == pytest.approx(u)
    assert result.p_value == pytest.approx(_brute_force_p_value(a, b))
    assert mann_whitney_u(b, a).p_value == pytest.approx(result.p_value)
    assert result.u + mann_whitney_u(b, a).u == pytest.approx(len(a) * len(b))


@pytest.mark.parametrize(
    ("a", "b", "p_value", "reject"),
    [
        ([1, 2, 3], [4, 5, 6], 0.1, False),
        ([1, 2, 3, 4], [5, 6, 7, 8], 2 / 70, True),
        ([1, 1, 1], [1, 1], 1.0, False),
    ],
)
def test_mann_whitney_small_samples(a, b, p_value, reject):
    result = mann_whitney_u(a, b)
    assert result.p_value == pytest.approx(p_value)
    assert result.reject == reject


def test_mann_whitney_alpha():
    assert not mann_whitney_u([1, 2, 3, 4], [5, 6, 7, 8], alpha=0.01).reject


def test_mann_whitney_large_samples_use_normal_approximation():
    rng = np.random.default_rng(7)
    a, b = rng.normal(0, 1, 40), rng.normal(0.5, 1, 30)
    expected = mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
    result = mann_whitney_u(a, b)
    assert result.u == pytest.approx(expected.statistic)
    assert result.p_value == pytest.approx(expected.pvalue)


@pytest.mark.parametrize(("a", "b"), [([], [1.0]), ([1.0], [])])
def test_mann_whitney_empty(a, b):
    with pytest.raises(DegenerateInputError):
        mann_whitney_u(a, b)


@pytest.mark.parametrize(
    ("word", "category"),
    [
        ("car", "physical"),
        ("night", "abstract"),
        ("day", "abstract"),
        ("abstraction", "abstract"),
        ("physical_entity", "physical"),
        ("orange", None),
        ("entity", None),
        ("plant", None),
    ],
)
def test_word_categorizer(graph, word, category):
    assert WordCategorizer(graph).category(word) == category


def test_word_categorizer_missing_anchor(tmp_path):
    directory = write_wordnet(tmp_path / "dict", [("entity", ["entity"], "an entity", [])])
    graph: WordNetGraph = parse_wordnet(directory)
    with pytest.raises(UnknownAnchorError):
        WordCategorizer(graph)


def test_abstract_physical_split(graph, classified):
    split = abstract_physical_split(graph, classified)
    assert [c.triplet.key for c in split.abstract] == [("night", Relation.ANT, "daytime")]
    assert len(split.physical) == 10
    assert all(c.triplet.relatum != "orange" for c in split.physical)
    assert split.physical_matrix.likelihood(Relation.MER, Relation.HYP) == 1.0
    assert not any(split.abstract_matrix.is_populated(r) for r in Relation)


def test_polysemy_comparison(graph, classified):
    comparison = polysemy_comparison(graph, classified)
    assert (comparison.n_abstract, comparison.n_physical) == (1, 4)
    assert comparison.abstract_mean == comparison.physical_mean == 1.0
    assert comparison.test.p_value == 1.0
    assert not comparison.test.reject


def test_status_distribution(classified):
    frame = status_distribution(classified).set_index(["relation", "status"])
    assert frame.loc[("HYP", "matched"), "count"] == 2
    assert frame.loc[("HYP", "missing"), "share"] == pytest.approx(0.4)
    assert frame.loc[("HYP", "mismatched"), "share"] == pytest.approx(0.2)
    assert frame.loc[("ANT", "matched"), "count"] == 1
    assert set(frame["subset"]) == {"all"}
    sums = frame.groupby(level="relation")["share"].sum()
    assert sums.to_dict() == pytest.approx({r.value: 1.0 for r in Relation})


def test_status_distribution_by_hapax(classified):
    hapax = status_distribution(classified, hapax=True).set_index(["relation", "status"])
    other = status_distribution(classified, hapax=False).set_index(["relation", "status"])
    assert hapax.loc[("HYP", "mismatched"), "share"] == pytest.approx(1 / 3)
    assert other.loc[("HYP", "matched"), "share"] == pytest.approx(0.5)
    assert other.loc[("HYP", "mismatched"), "count"] == 0
    assert hapax.loc[("MER", "matched"), "share"] == 0.0
    total = status_distribution(classified).set_index(["relation", "status"])
    assert (hapax["count"] + other["count"]).equals(total["count"])


def test_triplet_counts(classified, records):
    frame = triplet_counts(classified, records).set_index("relation")
    assert frame.loc["HYP"].to_dict() == {
        "target_words": 3,
        "templates": 2,
        "triplets": 5,
        "hapaxes": 3,
        "excluded": 1,
        "non_hapaxes": 2,
    }
    assert frame.loc["TOTAL"].to_dict() == {
        "target_words": 6,
        "templates": 11,
        "triplets": 12,
        "hapaxes": 5,
        "excluded": 2,
        "non_hapaxes": 7,
    }


def test_triplet_counts_without_records(classified):
    frame = triplet_counts(classified).set_index("relation")
    assert frame.loc["HYP", "target_words"] == 3
    assert frame["templates"].sum() == 0


def test_distance_points(classified):
    frame = distance_points(classified, frequency_of(classified))
    assert len(frame) == 6
    hyp = frame[frame["relation"] == "HYP"].set_index("relatum")
    assert hyp.loc["food", "distance"] == 2
    assert not hyp.loc["food", "direct"]
    assert hyp.loc["fruit", "frequency"] == pytest.approx(2 / 3)
    assert "wheel" not in hyp.index


def test_distance_summary(classified):
    frame = distance_summary(classified, frequency_of(classified)).set_index("relation")
    hyp, hpo = frame.loc["HYP"], frame.loc["HPO"]
    assert (hyp["direct"], hyp["missing"], hyp["indirect"]) == (2, 2, 2)
    assert hyp["recovery_share"] == 1.0
    assert hyp["share_distance_2_to_4"] == 1.0
    assert hyp["spearman_rho"] == pytest.approx(0.0, abs=1e-12)
    assert hyp["n_points"] == 4
    assert hpo["recovery_share"] == 0.0
    assert math.isnan(hpo["spearman_rho"])
