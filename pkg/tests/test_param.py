import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import as_float, camera_pair, camera_tensor
from trifocal.constraints import central_circular, validity_report
from trifocal.extraction import EpipolePair
from trifocal.linalg import DegenerateError, equal_up_to_scale, matrix_rank, null_space_basis, relative_scale_error
from trifocal.param import (
    N_PARAMS,
    ChartError,
    ParamError,
    ParamVector,
    circular_row,
    epipole_constraint_matrix,
    params_to_tensor,
    random_ablated_tensor,
    random_valid_tensor,
    slice_constraint_matrix,
    tensor_to_params,
)
from trifocal.scalars import Kind, as_array
from trifocal.tensor import Camera, TrifocalTensor, tensor_from_cameras

F = Fraction


def test_epipole_matrix_pattern():
    C = epipole_constraint_matrix([1, 0, 0])
    assert C.shape == (3, 9)
    assert [list(np.nonzero(r)[0]) for r in C] == [[0], [3], [6]]


def test_epipole_matrix_null_space_dimension():
    basis = null_space_basis(epipole_constraint_matrix([F(3), F(-2), F(1)]))
    assert len(basis) == 6


def test_slice_matrix_pattern():
    u, v = as_array([1, 2, 3]), as_array([4, 5, 6])
    row = as_array(list(range(1, 10)))
    C = slice_constraint_matrix(u, v, row)
    # first row: u . T[:, 0]
    assert list(C[0]) == [1, 0, 0, 2, 0, 0, 3, 0, 0]
    assert list(C[3]) == [4, 5, 6, 0, 0, 0, 0, 0, 0]
    assert list(C[6]) == list(row)
    assert slice_constraint_matrix(u, v, row, ablate=True).shape == (6, 9)


@pytest.mark.parametrize("seed", range(5))
def test_slice_matrix_ranks(seed):
    T = camera_tensor(seed)
    from trifocal.extraction import epipoles, slice_null_vectors

    n = slice_null_vectors(T)
    ep = epipoles(T, nulls=n)
    row = circular_row(ep.e2, ep.e3)
    for i in range(3):
        C = slice_constraint_matrix(n.U[i], n.V[i], row)
        assert matrix_rank(C[:6]) == 5
        assert matrix_rank(C) == 6
        assert len(null_space_basis(C)) == 3
        assert len(null_space_basis(C[:6])) == 4


def test_circular_row_degenerate_epipole():
    with pytest.raises(DegenerateError):
        circular_row(as_array([0, 1, 0]), as_array([F(1), 2, 3]))
    with pytest.raises(DegenerateError):
        circular_row(as_array([F(1), 2, 3]), as_array([0, F(-4), 0]))


def test_circular_row_reproduces_central_values(counter_T):
    ep = EpipolePair(as_array([100, 200, 1]), as_array([-500, -600, 1]))
    row = circular_row(ep.e2, ep.e3)
    assert tuple(row.dot(Ti.reshape(-1)) for Ti in counter_T.slices) == central_circular(counter_T, ep)


def test_circular_row_scale_invariant():
    e2, e3 = as_array([F(2), 3, 1]), as_array([F(-1), 5, 2])
    assert list(circular_row(e2 * 7, e3)) == list(circular_row(e2, e3))
    assert equal_up_to_scale(circular_row(e2, -e3 * F(1, 3)), circular_row(e2, e3))


def test_param_vector_length_checked():
    with pytest.raises(ValueError):
        ParamVector.from_list([F(1)] * 21)
    with pytest.raises(ValueError):
        ParamVector(e2=(1, 2, 3), e3=(1, 2), u=(1,) * 5, v=(1,) * 5, t1=(1, 1), t2=(1,) * 3, t3=(1,) * 3)


def test_rank1_U_rejected():
    p = tensor_to_params(random_valid_tensor(0))
    values = p.as_list()
    # all-zero U coordinates leave U equal to its last basis vector only
    values[4:9] = [F(0)] * 5
    with pytest.raises(ParamError):
        params_to_tensor(values)


@pytest.mark.parametrize("seed", range(10))
def test_roundtrip_generated(seed):
    T = random_valid_tensor(seed)
    p = tensor_to_params(T)
    assert len(p) == N_PARAMS and len(p.as_list()) == N_PARAMS
    assert equal_up_to_scale(params_to_tensor(p).array, T.array)
    assert tensor_to_params(params_to_tensor(p)) == p


@pytest.mark.parametrize("seed", range(10))
def test_roundtrip_camera_tensors(seed):
    T = camera_tensor(seed)
    assert equal_up_to_scale(params_to_tensor(tensor_to_params(T)).array, T.array)
    Tf = as_float(T)
    back = params_to_tensor(tensor_to_params(Tf))
    assert back.kind is Kind.FLOAT
    assert relative_scale_error(back.array, Tf.array) <= 1e-8


def test_params_forward_output_is_valid():
    T = params_to_tensor(tensor_to_params(random_valid_tensor(3)))
    assert validity_report(T).all_pass


def test_epipole_at_infinity_rejected():
    P2, P3 = camera_pair(0)
    M = np.array(P2.matrix, copy=True)
    M[:, 3] = as_array([1, 0, 0])
    with pytest.raises(ChartError):
        tensor_to_params(tensor_from_cameras(Camera(M), P3))


def test_counterexample_reverse_then_forward(counter_T):
    # the reverse map projects onto the valid set: the image is valid but not the input
    T = params_to_tensor(tensor_to_params(counter_T))
    assert validity_report(T).all_pass
    assert not equal_up_to_scale(T.array, counter_T.array)


def test_generator_deterministic():
    assert np.array_equal(random_valid_tensor(7).array, random_valid_tensor(7).array)
    assert np.array_equal(random_ablated_tensor(7).array, random_ablated_tensor(7).array)


def test_generator_seeds_distinct():
    flats = {tuple(random_valid_tensor(s).flat()) for s in range(100)}
    assert len(flats) == 100


def test_generator_float_kind():
    T = random_valid_tensor(2, Kind.FLOAT)
    assert T.kind is Kind.FLOAT
    assert np.allclose(T.array.astype(float), random_valid_tensor(2).array.astype(float), rtol=0, atol=0)


def test_changing_t2_changes_only_second_slice():
    p = tensor_to_params(random_valid_tensor(4))
    T = params_to_tensor(p)
    values = p.as_list()
    values[18] += 1
    T2 = params_to_tensor(values)
    assert np.array_equal(T.array[0], T2.array[0]) and np.array_equal(T.array[2], T2.array[2])
    assert not np.array_equal(T.array[1], T2.array[1])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_ablated_satisfies_rank_and_epipolar_only(seed):
    r = validity_report(random_ablated_tensor(seed))
    assert r["rank"].passed and r["epipolar"].passed
    assert all(v != 0 for v in r["central_circular"].residuals.values())
    assert not r.all_pass


def test_retry_exhaustion_message(monkeypatch):
    import trifocal.param as param

    monkeypatch.setattr(param, "_forward", lambda *a, **k: (_ for _ in ()).throw(ParamError("x")))
    with pytest.raises(RuntimeError, match="seed 3"):
        param.random_valid_tensor(3)


def test_singular_point_reported():
    # u_2 = a_2 x a_4 = (1, -1, 1) is parallel to the circular factor of e' = (1, 2, 1)
    P2 = Camera([[F(2), 1, 0, 1], [0, 1, 3, 2], [1, 0, 1, 1]])
    P3 = Camera([[1, 0, 2, F(1, 3)], [0, 1, 1, 5], [1, 1, 0, 1]])
    T = tensor_from_cameras(P2, P3)
    assert validity_report(T).all_pass
    with pytest.raises(ParamError, match="singular point"):
        tensor_to_params(T)
