"""Partition combinatorics: dimensions, degree tables, the so diagnostic."""

import pytest

from centinv.partitions import (
    ClassicalType,
    DegreeTable,
    InvalidPartitionError,
    Partition,
    degrees_gl,
    degrees_sp,
    dim_centralizer_gl,
    dim_centralizer_so_sp,
    even_index_degree_sum_so,
    is_valid_for,
    pairing_map,
    partitions_of,
    so_good_system_diagnostic,
)


def test_parse_normalises():
    assert Partition.parse("1,2").parts == (2, 1)
    assert Partition.parse("5, 3,2 ,2").parts == (5, 3, 2, 2)
    with pytest.raises(InvalidPartitionError):
        Partition.parse("2,0")
    with pytest.raises(InvalidPartitionError):
        Partition.parse("")
    with pytest.raises(InvalidPartitionError):
        Partition.parse("a,b")


def test_dim_centralizer_gl_examples():
    assert dim_centralizer_gl(Partition.parse("5,3,2,2")) == 38
    assert dim_centralizer_gl(Partition.parse("7")) == 7
    assert dim_centralizer_gl(Partition.parse("2,1")) == 5


def test_dim_so_sp_examples():
    assert dim_centralizer_so_sp(Partition.parse("5,3,2,2"), ClassicalType.SO) == 18
    # ones partition: zero nilpotent, centraliser is the full so_n
    for n in (3, 5, 7):
        ones = Partition(tuple([1] * n))
        assert dim_centralizer_so_sp(ones, ClassicalType.SO) == n * (n - 1) // 2
    # zero nilpotent in sp_2n: centraliser is the full sp_2n
    for n in (1, 2, 3):
        ones = Partition(tuple([1] * (2 * n)))
        assert dim_centralizer_so_sp(ones, ClassicalType.SP) == n * (2 * n + 1)
    assert dim_centralizer_so_sp(Partition.parse("2,1,1"), ClassicalType.SP) == 6
    assert dim_centralizer_so_sp(Partition.parse("2,2"), ClassicalType.SP) == 4


def test_type_validity():
    assert is_valid_for(Partition.parse("3,3,2"), ClassicalType.SP)
    assert not is_valid_for(Partition.parse("3,2,1"), ClassicalType.SP)
    assert is_valid_for(Partition.parse("5,3,2,2"), ClassicalType.SO)
    assert not is_valid_for(Partition.parse("2,1"), ClassicalType.SO)
    with pytest.raises(InvalidPartitionError) as err:
        dim_centralizer_so_sp(Partition.parse("3,2,1"), ClassicalType.SP)
    assert "odd part" in str(err.value)


def test_degrees_gl_examples():
    assert degrees_gl(Partition.parse("2,1")).degrees == (1, 1, 2)
    assert degrees_gl(Partition.parse("4")).degrees == (1, 1, 1, 1)
    table = degrees_gl(Partition.parse("5,3,2,2"))
    assert table.degrees == (1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 4, 4)
    assert table.total == 25 == (38 + 12) // 2


def test_degree_sum_identity_all_partitions_up_to_12():
    for n in range(1, 13):
        for p in partitions_of(n):
            table = degrees_gl(p)
            assert 2 * table.total == dim_centralizer_gl(p) + n
            assert all(a <= b for a, b in zip(table.degrees, table.degrees[1:]))


def test_degrees_sp_examples():
    assert degrees_sp(Partition.parse("2,1,1")).degrees == (1, 3)
    for n in (2, 3, 4):
        minimal = Partition(tuple([2] + [1] * (2 * n - 2)))
        assert degrees_sp(minimal).degrees == tuple(range(1, 2 * n, 2))
    with pytest.raises(InvalidPartitionError):
        degrees_sp(Partition.parse("3,2,1"))


def test_degrees_sp_sum_identity():
    for n in range(1, 7):
        for p in partitions_of(2 * n, ClassicalType.SP):
            table = degrees_sp(p)
            assert 2 * table.total == dim_centralizer_so_sp(p, ClassicalType.SP) + n


def test_pairing_consecutive():
    p = Partition.parse("5,3,2,2")
    pairing = pairing_map(p, ClassicalType.SO)
    assert pairing == {1: 1, 2: 2, 3: 4, 4: 3}
    psp = Partition.parse("3,3,1,1")
    pairing = pairing_map(psp, ClassicalType.SP)
    assert pairing == {1: 2, 2: 1, 3: 4, 4: 3}


def test_so_diagnostic_example():
    diag = so_good_system_diagnostic(Partition.parse("5,3,2,2"))
    assert diag.dim_centralizer == 18
    assert diag.even_degree_sum == 13
    assert diag.pfaffian_adjusted_sum == 11
    assert diag.bound == 12
    assert diag.verdict == "NO_GOOD_SYSTEM_FROM_MINORS"
    assert not diag.lemma_flags["even_top_row"]


def test_so_diagnostic_good_cases():
    diag = so_good_system_diagnostic(Partition.parse("3,1,1"))
    assert diag.lemma_flags["even_top_row"]
    assert diag.pfaffian_adjusted_sum == diag.bound
    assert diag.verdict == "GOOD_SYSTEM_FROM_MINORS"
    ones = so_good_system_diagnostic(Partition(tuple([1] * 5)))
    assert ones.verdict == "GOOD_SYSTEM_FROM_MINORS"


def test_even_degree_sum_matches_direct_reading():
    # the closed pairing formula must agree with summing the gl table directly
    for n in range(1, 13):
        for p in partitions_of(n, ClassicalType.SO):
            table = degrees_gl(p).degrees
            direct = sum(table[2 * j - 1] for j in range(1, n // 2 + 1))
            assert even_index_degree_sum_so(p) == direct, p


def test_even_top_row_hypotheses_force_equality():
    hits = 0
    for n in range(2, 13):
        for p in partitions_of(n, ClassicalType.SO):
            diag = so_good_system_diagnostic(p)
            if diag.lemma_flags["even_top_row"]:
                hits += 1
                assert diag.pfaffian_adjusted_sum == diag.bound, p
    assert hits > 10


def test_partitions_of_counts():
    counts = [len(list(partitions_of(n))) for n in range(1, 9)]
    assert counts == [1, 2, 3, 5, 7, 11, 15, 22]


def test_degree_table_str():
    assert str(DegreeTable((1, 1, 2))) == "(1, 1, 2)"
