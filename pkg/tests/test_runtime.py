import random

import pytest
from hypothesis import given, strategies as st

from seanode.runtime import (
    INT_MAX, INT_MIN, STATIC_REF, UNDEF, DynamicHeap, IntVal, MethodState,
    ObjRef, TypeMismatch, int_add, int_mul, int_neg, new_map_state,
    val_to_bool, wrap32,
)


def test_fresh_state_reads_undef():
    assert new_map_state()[42] == UNDEF


def test_state_update_read_back():
    m = new_map_state().set(7, IntVal(1))
    assert m[7] == IntVal(1)


def test_fresh_states_equal():
    assert new_map_state() == new_map_state()


def test_state_set_is_persistent():
    m = new_map_state()
    m2 = m.set(1, IntVal(5))
    assert m[1] == UNDEF and m2[1] == IntVal(5)


def test_state_undef_write_normalizes():
    m = new_map_state().set(1, IntVal(5)).set(1, UNDEF)
    assert m == new_map_state()


def test_intval_range_checked():
    IntVal(INT_MIN)
    IntVal(INT_MAX)
    with pytest.raises(ValueError):
        IntVal(INT_MAX + 1)


def test_add_wraps_at_max():
    assert int_add(IntVal(2147483647), IntVal(1)) == IntVal(-2147483648)


def test_neg_wraps_min_int():
    assert int_neg(IntVal(INT_MIN)) == IntVal(INT_MIN)


@given(st.integers(), st.integers())
def test_wrap32_is_twos_complement(a, b):
    assert wrap32(a + b) == wrap32(wrap32(a) + wrap32(b))
    assert INT_MIN <= wrap32(a) <= INT_MAX
    assert (wrap32(a) - a) % (2 ** 32) == 0


@given(st.integers(INT_MIN, INT_MAX), st.integers(INT_MIN, INT_MAX))
def test_mul_matches_java_semantics(a, b):
    assert int_mul(IntVal(a), IntVal(b)).value == wrap32(a * b)


def test_val_to_bool():
    assert val_to_bool(IntVal(1)) is True
    assert val_to_bool(IntVal(0)) is False
    with pytest.raises(TypeMismatch):
        val_to_bool(UNDEF)
    with pytest.raises(TypeMismatch):
        val_to_bool(ObjRef(0))


def test_load_fresh_field_defaults_to_zero():
    ref, heap = DynamicHeap().new_instance("Point")
    assert heap.load_field("x", ref) == IntVal(0)


def test_store_load_round_trip():
    ref, heap = DynamicHeap().new_instance("Point")
    heap = heap.store_field("x", ref, IntVal(9))
    assert heap.load_field("x", ref) == IntVal(9)


def test_static_region_round_trip():
    heap = DynamicHeap().store_field("counter", None, IntVal(3))
    assert heap.load_field("counter", None) == IntVal(3)
    assert heap.fields[(STATIC_REF, "counter")] == IntVal(3)


def test_store_does_not_alias_other_fields():
    ref, heap = DynamicHeap().new_instance("Point")
    heap = heap.store_field("x", ref, IntVal(9))
    assert heap.load_field("y", ref) == IntVal(0)


def test_overwrite_last_wins():
    ref, heap = DynamicHeap().new_instance("Point")
    heap = heap.store_field("x", ref, IntVal(1)).store_field("x", ref, IntVal(2))
    assert heap.load_field("x", ref) == IntVal(2)


def test_store_is_persistent():
    ref, heap = DynamicHeap().new_instance("Point")
    heap.store_field("x", ref, IntVal(9))
    assert heap.load_field("x", ref) == IntVal(0)


def test_first_allocation_from_empty_heap():
    ref, heap = DynamicHeap().new_instance("Point")
    assert ref == ObjRef(0) and heap.free == 1


def test_successive_allocations():
    heap = DynamicHeap()
    r0, heap = heap.new_instance("A")
    r1, heap = heap.new_instance("B")
    assert (r0, r1) == (ObjRef(0), ObjRef(1))
    assert heap.classes == {0: "A", 1: "B"}


def test_allocation_preserves_fields():
    ref, heap = DynamicHeap().new_instance("A")
    heap = heap.store_field("x", ref, IntVal(7))
    _, heap2 = heap.new_instance("B")
    assert heap2.load_field("x", ref) == IntVal(7)


def test_allocation_monotonicity():
    heap = DynamicHeap()
    seen = []
    for _ in range(20):
        ref, heap = heap.new_instance("A")
        assert ref.ref < heap.free
        seen.append(ref.ref)
    assert len(set(seen)) == len(seen)


def test_heap_frame_property_fuzz():
    # Random store sequences never perturb unrelated (ref, field) cells.
    rng = random.Random(7)
    refs = [STATIC_REF, 0, 1, 2, 3]
    fields = ["a", "b", "c"]
    heap = DynamicHeap()
    for _ in range(4):
        _, heap = heap.new_instance("T")
    for _ in range(200):
        before = dict(heap.fields)
        addr, fname = rng.choice(refs), rng.choice(fields)
        v = IntVal(rng.randint(-10, 10))
        obj = None if addr == STATIC_REF else ObjRef(addr)
        heap = heap.store_field(fname, obj, v)
        assert heap.fields[(addr, fname)] == v
        for key, old in before.items():
            if key != (addr, fname):
                assert heap.fields[key] == old
