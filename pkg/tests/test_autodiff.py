import numpy as np
import pytest

import srlparser.autodiff as ad
from srlparser.autodiff import Parameter, Tensor

RNG = np.random.default_rng


def finite_diff_check(build_loss, tensors, h=1e-5, tol=1e-4):
    """Check every entry of every tensor against central differences.

    Relative error uses a 1e-3 denominator floor so that near-zero
    gradients degrade into an absolute 1e-7 tolerance, well above the
    float64 roundoff of the difference quotient.
    """
    for t in tensors:
        t.grad = None
    loss = build_loss()
    loss.backward()
    worst = 0.0
    for t in tensors:
        analytic = np.zeros_like(t.data) if t.grad is None else t.grad.copy()
        flat = t.data.reshape(-1)
        aflat = analytic.reshape(-1)
        for k in range(flat.size):
            orig = flat[k]
            flat[k] = orig + h
            up = build_loss().item()
            flat[k] = orig - h
            down = build_loss().item()
            flat[k] = orig
            numeric = (up - down) / (2.0 * h)
            denom = max(abs(aflat[k]), abs(numeric), 1e-3)
            worst = max(worst, abs(aflat[k] - numeric) / denom)
    assert worst < tol, f"max relative gradient error {worst:.3e}"
    return worst


def leaf(rng, *shape):
    return Tensor(rng.standard_normal(shape), requires_grad=True)


class TestElementwise:
    def test_add_equal_shapes(self):
        rng = RNG(0)
        a, b = leaf(rng, 4), leaf(rng, 4)
        finite_diff_check(lambda: ad.sum_all(ad.mul(ad.add(a, b), a)), [a, b])

    def test_add_bias_broadcast(self):
        rng = RNG(1)
        a, b = leaf(rng, 3, 4), leaf(rng, 4)
        finite_diff_check(lambda: ad.sum_all(ad.tanh(ad.add(a, b))), [a, b])

    def test_add_shape_mismatch(self):
        with pytest.raises(ad.DimensionError, match="add"):
            ad.add(Tensor(np.zeros(3)), Tensor(np.zeros(4)))

    def test_add_scalar(self):
        rng = RNG(2)
        a = leaf(rng, 5)
        s = Tensor(np.asarray(0.7), requires_grad=True)
        finite_diff_check(lambda: ad.sum_all(ad.sigmoid(ad.add_scalar(a, s))), [a, s])

    def test_mul_scale_addn(self):
        rng = RNG(3)
        a, b, c = leaf(rng, 4), leaf(rng, 4), leaf(rng, 4)
        finite_diff_check(
            lambda: ad.sum_all(ad.add_n([ad.mul(a, b), ad.scale(c, -1.5), a])),
            [a, b, c])

    def test_nonlinearities(self):
        rng = RNG(4)
        a = leaf(rng, 6)
        finite_diff_check(lambda: ad.sum_all(ad.tanh(a)), [a])
        finite_diff_check(lambda: ad.sum_all(ad.sigmoid(a)), [a])
        finite_diff_check(lambda: ad.sum_all(ad.elu(a)), [a])

    def test_elu_definition(self):
        x = Tensor(np.array([-50.0, -1.0, 0.0, 2.5]))
        y = ad.elu(x).data
        assert y[0] == pytest.approx(-1.0)  # limit for very negative inputs
        assert y[1] == pytest.approx(np.expm1(-1.0))
        assert y[2] == 0.0
        assert y[3] == 2.5  # identity for x >= 0


class TestMatmul:
    def test_all_shape_cases(self):
        rng = RNG(5)
        m, k, n = 3, 4, 2
        a2, b2 = leaf(rng, m, k), leaf(rng, k, n)
        finite_diff_check(lambda: ad.sum_all(ad.matmul(a2, b2)), [a2, b2])
        v1, m1 = leaf(rng, k), leaf(rng, k, n)
        finite_diff_check(lambda: ad.sum_all(ad.matmul(v1, m1)), [v1, m1])
        m2, v2 = leaf(rng, m, k), leaf(rng, k)
        finite_diff_check(lambda: ad.sum_all(ad.matmul(m2, v2)), [m2, v2])
        u, w = leaf(rng, k), leaf(rng, k)
        finite_diff_check(lambda: ad.matmul(u, w), [u, w])

    def test_linear_case_exact(self):
        # loss = sum(W @ x): grad(W) is the outer structure of x
        rng = RNG(6)
        w, x = leaf(rng, 3, 4), leaf(rng, 4)
        loss = ad.sum_all(ad.matmul(w, x))
        loss.backward()
        np.testing.assert_allclose(w.grad, np.tile(x.data, (3, 1)))
        np.testing.assert_allclose(x.grad, w.data.sum(axis=0))

    def test_linear_and_transpose(self):
        rng = RNG(7)
        w, b = leaf(rng, 3, 5), leaf(rng, 3)
        x = leaf(rng, 5)
        finite_diff_check(lambda: ad.sum_all(ad.linear(x, w, b)), [w, b, x])
        xm = leaf(rng, 4, 5)
        finite_diff_check(lambda: ad.sum_all(ad.elu(ad.linear(xm, w, b))), [w, b, xm])

    def test_dimension_error(self):
        with pytest.raises(ad.DimensionError, match="matmul"):
            ad.matmul(Tensor(np.zeros((2, 3))), Tensor(np.zeros((4, 2))))


class TestShapePlumbing:
    def test_concat_stack_take_slice(self):
        rng = RNG(8)
        a, b = leaf(rng, 3), leaf(rng, 2)
        finite_diff_check(lambda: ad.sum_all(ad.tanh(ad.concat_vec([a, b]))), [a, b])
        rows = [leaf(rng, 4) for _ in range(3)]
        finite_diff_check(lambda: ad.sum_all(ad.sigmoid(ad.stack_rows(rows))), rows)
        table = leaf(rng, 6, 4)
        finite_diff_check(lambda: ad.sum_all(ad.embed(table, 2)), [table])
        finite_diff_check(lambda: ad.sum_all(ad.take_rows(table, [1, 1, 5])), [table])
        v = leaf(rng, 6)
        finite_diff_check(lambda: ad.sum_all(ad.slice_vec(v, 1, 4)), [v])

    def test_repeated_row_lookup_accumulates(self):
        table = Tensor(np.ones((3, 2)), requires_grad=True)
        loss = ad.sum_all(ad.take_rows(table, [1, 1]))
        loss.backward()
        np.testing.assert_allclose(table.grad, [[0, 0], [2, 2], [0, 0]])


class TestSoftmaxAndLoss:
    def test_uniform_at_zero_scores(self):
        p = ad.softmax(Tensor(np.zeros(3))).data
        np.testing.assert_allclose(p, [1 / 3] * 3)

    def test_distribution_properties(self):
        rng = RNG(9)
        for _ in range(50):
            p = ad.softmax(Tensor(rng.standard_normal(7) * 10)).data
            assert abs(p.sum() - 1.0) < 1e-12
            assert (p > 0).all()

    def test_gradients(self):
        rng = RNG(10)
        v = leaf(rng, 5)
        finite_diff_check(lambda: ad.cross_entropy(ad.softmax(v), 2), [v])

    def test_perfect_prediction_zero_loss(self):
        scores = Tensor(np.array([500.0, 0.0, 0.0]))
        p = ad.softmax(scores)
        assert p.data[0] == 1.0
        assert ad.cross_entropy(p, 0).item() == 0.0

    def test_backward_requires_scalar(self):
        v = leaf(RNG(11), 3)
        with pytest.raises(ad.DimensionError, match="scalar"):
            ad.tanh(v).backward()


class TestDropout:
    def test_eval_mode_is_identity(self):
        rng = RNG(12)
        x = leaf(rng, 5)
        y = ad.dropout(x, 0.5, train=False, rng=rng)
        assert y is x
        loss = ad.sum_all(y)
        loss.backward()
        np.testing.assert_allclose(x.grad, np.ones(5))

    def test_train_mode_masks_and_rescales(self):
        rng = RNG(13)
        x = Tensor(np.ones(1000), requires_grad=True)
        y = ad.dropout(x, 0.25, train=True, rng=rng)
        values = set(np.round(np.unique(y.data), 10))
        assert values <= {0.0, round(1 / 0.75, 10)}
        assert abs(y.data.mean() - 1.0) < 0.1

    def test_mask_gradient(self):
        rng = RNG(14)
        x = leaf(rng, 8)
        mask = ad.dropout_mask((8,), 0.5, RNG(99))
        finite_diff_check(lambda: ad.sum_all(ad.mul_const(x, mask)), [x])


class TestBilinear:
    def test_hand_expansion_2d(self):
        a = Tensor(np.array([1.0, 2.0]))
        b = Tensor(np.array([3.0, -1.0]))
        w = Tensor(np.array([[2.0, 0.5], [1.0, -1.0]]))
        expected = sum(a.data[i] * w.data[i, j] * b.data[j] for i in range(2) for j in range(2))
        assert ad.bilinear(a, w, b).item() == pytest.approx(expected)

    def test_gradients_2d_and_3d(self):
        rng = RNG(15)
        a, b = leaf(rng, 3), leaf(rng, 4)
        w2 = leaf(rng, 3, 4)
        finite_diff_check(lambda: ad.bilinear(a, w2, b), [a, w2, b])
        w3 = leaf(rng, 5, 3, 4)
        finite_diff_check(lambda: ad.sum_all(ad.softmax(ad.bilinear(a, w3, b))), [a, w3, b])

    def test_label_stack_matches_per_label_loops(self):
        rng = RNG(16)
        a, b = leaf(rng, 3), leaf(rng, 3)
        w3 = leaf(rng, 4, 3, 3)
        stacked = ad.bilinear(a, w3, b).data
        for label in range(4):
            one = float(a.data @ w3.data[label] @ b.data)
            assert stacked[label] == pytest.approx(one)


class TestConv:
    def test_window_equal_to_length_is_single_application(self):
        seq = Tensor(np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]))
        filters = Tensor(np.arange(12, dtype=float).reshape(2, 6))
        bias = Tensor(np.array([0.5, -0.5]))
        out = ad.conv1d_maxpool(seq, filters, bias, window=3).data
        expected = filters.data @ seq.data.reshape(-1) + bias.data
        np.testing.assert_allclose(out, expected)

    def test_short_sequence_zero_padded(self):
        seq = Tensor(np.array([[1.0, -1.0]]))
        filters = Tensor(np.eye(6)[:2] * 2.0)
        bias = Tensor(np.zeros(2))
        out = ad.conv1d_maxpool(seq, filters, bias, window=3).data
        np.testing.assert_allclose(out, [2.0, -2.0])

    def test_gradients(self):
        rng = RNG(17)
        seq = leaf(rng, 5, 3)
        filters = leaf(rng, 4, 9)
        bias = leaf(rng, 4)
        finite_diff_check(
            lambda: ad.sum_all(ad.tanh(ad.conv1d_maxpool(seq, filters, bias, 3))),
            [seq, filters, bias])

    def test_gradients_with_padding(self):
        rng = RNG(18)
        seq = leaf(rng, 2, 3)
        filters = leaf(rng, 4, 9)
        bias = leaf(rng, 4)
        finite_diff_check(
            lambda: ad.sum_all(ad.conv1d_maxpool(seq, filters, bias, 3)),
            [seq, filters, bias])


class TestLSTM:
    @staticmethod
    def _weights(rng, in_dim, hidden):
        return ad.LSTMWeights(
            Tensor(rng.standard_normal((4 * hidden, in_dim)) * 0.4, requires_grad=True),
            Tensor(rng.standard_normal((4 * hidden, hidden)) * 0.4, requires_grad=True),
            Tensor(rng.standard_normal(4 * hidden) * 0.2, requires_grad=True))

    def test_step_gradients(self):
        rng = RNG(19)
        w = self._weights(rng, 3, 4)
        x, h, c = leaf(rng, 3), leaf(rng, 4), leaf(rng, 4)

        def loss():
            h2, c2 = ad.lstm_step(x, h, c, w)
            return ad.sum_all(ad.mul(h2, c2))

        finite_diff_check(loss, [x, h, c, w.w_x, w.w_h, w.bias])

    def test_unrolled_sequence_gradients(self):
        rng = RNG(20)
        w = self._weights(rng, 2, 3)
        xs = [leaf(rng, 2) for _ in range(4)]

        def loss():
            h = Tensor(np.zeros(3))
            c = Tensor(np.zeros(3))
            for x in xs:
                h, c = ad.lstm_step(x, h, c, w)
            return ad.sum_all(h)

        finite_diff_check(loss, xs + [w.w_x, w.w_h, w.bias])

    def test_matches_composed_formulation(self):
        rng = RNG(21)
        w = self._weights(rng, 3, 5)
        x, h, c = leaf(rng, 3), leaf(rng, 5), leaf(rng, 5)
        h2, c2 = ad.lstm_step(x, h, c, w)
        z = w.w_x.data @ x.data + w.w_h.data @ h.data + w.bias.data

        def sig(v):
            return 1 / (1 + np.exp(-v))

        c_ref = sig(z[5:10]) * c.data + sig(z[:5]) * np.tanh(z[10:15])
        h_ref = sig(z[15:]) * np.tanh(c_ref)
        np.testing.assert_allclose(c2.data, c_ref, atol=1e-12)
        np.testing.assert_allclose(h2.data, h_ref, atol=1e-12)


class TestComposite:
    def test_two_layer_bilstm_biaffine_under_500_params(self):
        """Exhaustive central-difference check on a small recurrent network."""
        rng = RNG(22)
        hidden, in_dim = 3, 2
        layers = [(TestLSTM._weights(rng, in_dim, hidden),
                   TestLSTM._weights(rng, in_dim, hidden)),
                  (TestLSTM._weights(rng, 2 * hidden, hidden),
                   TestLSTM._weights(rng, 2 * hidden, hidden))]
        w3 = Tensor(rng.standard_normal((2, 2 * hidden, 2 * hidden)) * 0.3,
                    requires_grad=True)
        xs = [leaf(rng, in_dim) for _ in range(3)]
        tensors = [t for fw, bw in layers
                   for t in (fw.w_x, fw.w_h, fw.bias, bw.w_x, bw.w_h, bw.bias)]
        tensors += [w3] + xs
        assert sum(t.data.size for t in tensors) <= 500

        def loss():
            seq = xs
            for fw, bw in layers:
                zero = Tensor(np.zeros(hidden))
                f_states, b_states = [], []
                h, c = zero, zero
                for x in seq:
                    h, c = ad.lstm_step(x, h, c, fw)
                    f_states.append(h)
                h, c = zero, zero
                for x in reversed(seq):
                    h, c = ad.lstm_step(x, h, c, bw)
                    b_states.append(h)
                b_states.reverse()
                seq = [ad.concat_vec([f, b]) for f, b in zip(f_states, b_states)]
            scores = ad.bilinear(seq[0], w3, seq[-1])
            return ad.cross_entropy(ad.softmax(scores), 1)

        worst = finite_diff_check(loss, tensors)
        assert worst < 1e-4


class TestDeterminism:
    def test_same_seed_same_masks(self):
        m1 = ad.dropout_mask((64,), 0.33, RNG(42))
        m2 = ad.dropout_mask((64,), 0.33, RNG(42))
        np.testing.assert_array_equal(m1, m2)

    def test_glorot_reproducible(self):
        a = ad.glorot_uniform(RNG(5), (4, 7))
        b = ad.glorot_uniform(RNG(5), (4, 7))
        np.testing.assert_array_equal(a, b)
        assert abs(a).max() <= np.sqrt(6.0 / 11)


class TestNoGrad:
    def test_no_graph_built(self):
        x = Tensor(np.ones(3), requires_grad=True)
        with ad.no_grad():
            y = ad.sum_all(ad.tanh(x))
        assert not y.requires_grad
        assert y._parents == ()

    def test_values_identical(self):
        rng = RNG(23)
        x = leaf(rng, 4)
        with ad.no_grad():
            a = ad.softmax(ad.tanh(x)).data
        b = ad.softmax(ad.tanh(x)).data
        np.testing.assert_array_equal(a, b)


class TestParameter:
    def test_moment_buffers_match_shape(self):
        p = Parameter("w", np.zeros((3, 2)))
        assert p.m.shape == (3, 2)
        assert p.v.shape == (3, 2)
        assert p.tensor.requires_grad
