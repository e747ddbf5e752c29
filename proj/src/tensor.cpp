#include "tenspec/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "tenspec/errors.hpp"

namespace tenspec {

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw ShapeError("tensor order must be at least 2");
    strides_.assign(dims_.size(), 1);
    size_ = 1;
    for (std::size_t k = dims_.size(); k-- > 0;) {
        if (dims_[k] == 0) throw ShapeError("tensor dimensions must be positive");
        strides_[k] = size_;
        size_ *= dims_[k];
    }
}

Shape Shape::cube(std::size_t n, std::size_t d) { return Shape(std::vector<std::size_t>(d, n)); }

bool Shape::equidimensional() const {
    return std::all_of(dims_.begin(), dims_.end(), [&](std::size_t m) { return m == dims_[0]; });
}

std::size_t Shape::flat(std::span<const std::size_t> idx) const {
    std::size_t f = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) f += idx[k] * strides_[k];
    return f;
}

Index Shape::unflat(std::size_t flat) const {
    Index idx(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        idx[k] = flat / strides_[k];
        flat %= strides_[k];
    }
    return idx;
}

bool Shape::next(Index& idx) const {
    for (std::size_t k = dims_.size(); k-- > 0;) {
        if (++idx[k] < dims_[k]) return true;
        idx[k] = 0;
    }
    return false;
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values, bool partially_symmetric)
    : shape_(std::move(shape)), values_(std::move(values)), partially_symmetric_(partially_symmetric) {
    if (values_.size() != shape_.size())
        throw ShapeError("value count " + std::to_string(values_.size()) + " does not match shape size " +
                         std::to_string(shape_.size()));
}

DenseTensor DenseTensor::zeros(const Shape& shape) {
    return DenseTensor(shape, std::vector<double>(shape.size(), 0.0), shape.equidimensional());
}

DenseTensor DenseTensor::identity(std::size_t n, std::size_t d) {
    Shape s = Shape::cube(n, d);
    std::vector<double> v(s.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) v[s.flat(Index(d, i))] = 1.0;
    return DenseTensor(s, std::move(v), true);
}

DenseTensor DenseTensor::ones(std::size_t n, std::size_t d) {
    Shape s = Shape::cube(n, d);
    return DenseTensor(s, std::vector<double>(s.size(), 1.0), true);
}

DenseTensor DenseTensor::from_matrix(const Matrix& m) {
    Shape s({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    std::vector<double> v(s.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
    return DenseTensor(s, std::move(v), true);
}

std::size_t DenseTensor::n() const {
    if (!shape_.equidimensional()) throw ShapeError("tensor is not equidimensional");
    return shape_.dim(0);
}

double DenseTensor::at(std::initializer_list<std::size_t> idx) const {
    if (idx.size() != order()) throw ShapeError("index length does not match order");
    return values_[shape_.flat(std::span<const std::size_t>(idx.begin(), idx.size()))];
}

double DenseTensor::max_entry() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

Matrix DenseTensor::to_matrix() const {
    if (order() != 2) throw ShapeError("to_matrix requires order 2");
    Matrix m(shape_.dim(0), shape_.dim(1));
    for (std::size_t i = 0; i < shape_.dim(0); ++i)
        for (std::size_t j = 0; j < shape_.dim(1); ++j) m(i, j) = values_[i * shape_.dim(1) + j];
    return m;
}

DenseTensor DenseTensor::scaled(double c) const {
    std::vector<double> v = values_;
    for (double& x : v) x *= c;
    return DenseTensor(shape_, std::move(v), partially_symmetric_);
}

DenseTensor DenseTensor::with_flag(bool ps) const { return DenseTensor(shape_, values_, ps); }

namespace {

Index canonical(Index idx) {
    std::sort(idx.begin() + 1, idx.end());
    return idx;
}

void require_same_shape(const DenseTensor& a, const DenseTensor& b) {
    if (!(a.shape() == b.shape())) throw ShapeError("tensor shapes differ");
}

void require_length(const DenseTensor& t, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != t.n())
        throw ShapeError("vector length " + std::to_string(x.size()) + " does not match n = " + std::to_string(t.n()));
}

// contracts the last mode of a row-major block of width n
std::vector<double> contract_last(const std::vector<double>& v, std::size_t n, const Vector& x) {
    std::vector<double> out(v.size() / n, 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double s = 0.0;
        const double* row = v.data() + k * n;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
        out[k] = s;
    }
    return out;
}

}  // namespace

std::size_t tail_count(std::span<const std::size_t> idx, std::size_t j) {
    return static_cast<std::size_t>(std::count(idx.begin() + 1, idx.end(), j));
}

std::size_t orbit_size(std::span<const std::size_t> idx) {
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t k = 1; k < idx.size(); ++k) ++counts[idx[k]];
    double r = std::tgamma(static_cast<double>(idx.size())); // (d-1)!
    for (auto& [_, c] : counts) r /= std::tgamma(static_cast<double>(c) + 1.0);
    return static_cast<std::size_t>(std::llround(r));
}

bool is_tail_symmetric(const DenseTensor& t) {
    const Shape& s = t.shape();
    for (std::size_t k = 2; k < s.order(); ++k)
        if (s.dim(k) != s.dim(1)) return false;
    Index idx(s.order(), 0);
    do {
        if (t(idx) != t(canonical(idx))) return false;
    } while (s.next(idx));
    return true;
}

bool is_symmetric(const DenseTensor& t) {
    const Shape& s = t.shape();
    if (!s.equidimensional()) return false;
    Index idx(s.order(), 0);
    do {
        Index c = idx;
        std::sort(c.begin(), c.end());
        if (t(idx) != t(c)) return false;
    } while (s.next(idx));
    return true;
}

std::vector<Violation> validate(const DenseTensor& t) {
    std::vector<Violation> out;
    const Shape& s = t.shape();
    Index idx(s.order(), 0);
    do {
        double v = t(idx);
        if (!(v >= 0.0) || !std::isfinite(v)) out.push_back({idx, "entry must be finite and nonnegative"});
    } while (s.next(idx));
    if (t.partially_symmetric()) {
        bool tail_dims_equal = true;
        for (std::size_t k = 2; k < s.order(); ++k) tail_dims_equal &= s.dim(k) == s.dim(1);
        if (!tail_dims_equal) {
            out.push_back({Index{}, "partially symmetric tensor needs equal tail dimensions"});
            return out;
        }
        std::fill(idx.begin(), idx.end(), 0);
        do {
            if (!std::is_sorted(idx.begin() + 1, idx.end())) continue;
            // one report per orbit: walk the permutations of the sorted tail
            Index p = idx;
            const double v = t(idx);
            bool ok = true;
            while (std::next_permutation(p.begin() + 1, p.end()))
                if (t(p) != v) ok = false;
            if (!ok) out.push_back({idx, "tail symmetry: values differ within the permutation orbit"});
        } while (s.next(idx));
    }
    return out;
}

DenseTensor symmetrize_tail(const DenseTensor& t) {
    const Shape& s = t.shape();
    for (std::size_t k = 2; k < s.order(); ++k)
        if (s.dim(k) != s.dim(1)) throw ShapeError("tail dimensions must agree to symmetrize");
    std::vector<double> v(s.size());
    Index idx(s.order(), 0);
    do {
        if (!std::is_sorted(idx.begin() + 1, idx.end())) continue;
        Index p = idx;
        double sum = 0.0;
        std::size_t cnt = 0;
        do {
            sum += t(p);
            ++cnt;
        } while (std::next_permutation(p.begin() + 1, p.end()));
        const double avg = sum / static_cast<double>(cnt);
        p = idx;
        do {
            v[s.flat(p)] = avg;
        } while (std::next_permutation(p.begin() + 1, p.end()));
    } while (s.next(idx));
    return DenseTensor(s, std::move(v), true);
}

Vector apply(const DenseTensor& t, const Vector& x) {
    const std::size_t n = t.n();
    require_length(t, x);
    std::vector<double> v = t.values();
    for (std::size_t k = 1; k < t.order(); ++k) v = contract_last(v, n, x);
    return Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(n));
}

Matrix differential(const DenseTensor& t, const Vector& x) {
    const std::size_t n = t.n();
    require_length(t, x);
    if (!is_tail_symmetric(t)) throw SymmetryError("differential requires a partially symmetric tensor");
    std::vector<double> v = t.values();
    for (std::size_t k = 2; k < t.order(); ++k) v = contract_last(v, n, x);
    Matrix m(n, n);
    const double f = static_cast<double>(t.order() - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = f * v[i * n + j];
    return m;
}

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b);
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] * b[k];
    return DenseTensor(a.shape(), std::move(v), a.partially_symmetric() && b.partially_symmetric());
}

DenseTensor hadamard_power(const DenseTensor& t, double s) {
    if (!(s >= 0.0)) throw DomainError("hadamard_power needs s >= 0");
    std::vector<double> v(t.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = t[k] == 0.0 ? 0.0 : std::pow(t[k], s);
    return DenseTensor(t.shape(), std::move(v), t.partially_symmetric());
}

DenseTensor kronecker(const DenseTensor& a, const DenseTensor& b) {
    if (a.order() != b.order()) throw ShapeError("kronecker needs equal orders");
    const std::size_t d = a.order();
    std::vector<std::size_t> dims(d);
    for (std::size_t k = 0; k < d; ++k) dims[k] = a.shape().dim(k) * b.shape().dim(k);
    Shape s(dims);
    std::vector<double> v(s.size(), 0.0);
    Index ia(d, 0), out(d);
    do {
        const double av = a(ia);
        if (av == 0.0) continue;
        Index ib(d, 0);
        do {
            for (std::size_t k = 0; k < d; ++k) out[k] = ia[k] * b.shape().dim(k) + ib[k];
            v[s.flat(out)] = av * b(ib);
        } while (b.shape().next(ib));
    } while (a.shape().next(ia));
    return DenseTensor(s, std::move(v), a.partially_symmetric() && b.partially_symmetric());
}

DenseTensor pattern(const DenseTensor& t) {
    std::vector<double> v(t.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = t[k] > 0.0 ? 1.0 : 0.0;
    return DenseTensor(t.shape(), std::move(v), t.partially_symmetric());
}

DenseTensor diag_scale(const Vector& y, const DenseTensor& t) {
    require_length(t, y);
    const std::size_t block = t.size() / t.n();
    std::vector<double> v = t.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= y[static_cast<Eigen::Index>(k / block)];
    return DenseTensor(t.shape(), std::move(v), t.partially_symmetric());
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b, double beta) {
    require_same_shape(a, b);
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + beta * b[k];
    return DenseTensor(a.shape(), std::move(v), a.partially_symmetric() && b.partially_symmetric());
}

DenseTensor outer(const DenseTensor& a, const DenseTensor& b) {
    std::vector<std::size_t> dims = a.shape().dims();
    dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
    std::vector<double> v;
    v.reserve(a.size() * b.size());
    for (double x : a.values())
        for (double y : b.values()) v.push_back(x * y);
    return DenseTensor(Shape(dims), std::move(v), false);
}

DenseTensor permute_labels(const DenseTensor& t, const std::vector<std::size_t>& perm) {
    const std::size_t n = t.n();
    if (perm.size() != n) throw ShapeError("permutation length mismatch");
    std::vector<double> v(t.size());
    Index idx(t.order(), 0), out(t.order());
    do {
        for (std::size_t k = 0; k < idx.size(); ++k) out[k] = perm[idx[k]];
        v[t.shape().flat(out)] = t(idx);
    } while (t.shape().next(idx));
    return DenseTensor(t.shape(), std::move(v), t.partially_symmetric());
}

SparseSupportTensor::SparseSupportTensor(std::size_t n, std::size_t d, std::vector<SparseEntry> entries)
    : n_(n), d_(d), entries_(std::move(entries)), by_state_(n) {
    if (n == 0 || d < 2) throw ShapeError("sparse tensor needs n >= 1 and d >= 2");
    std::sort(entries_.begin(), entries_.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.idx < b.idx; });
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        const SparseEntry& en = entries_[e];
        if (en.idx.size() != d) throw ShapeError("sparse entry index length does not match d");
        for (std::size_t i : en.idx)
            if (i >= n) throw ShapeError("sparse entry index out of range");
        if (!std::is_sorted(en.idx.begin() + 1, en.idx.end()))
            throw DomainError("sparse entry tail must be sorted nondecreasing");
        if (!(en.value > 0.0) || !std::isfinite(en.value))
            throw DomainError("sparse entry values must be positive and finite");
        if (e > 0 && entries_[e - 1].idx == en.idx) throw DomainError("duplicate symmetry class in sparse tensor");
        by_state_[en.idx[0]].push_back(e);
    }
}

std::size_t SparseSupportTensor::find(std::span<const std::size_t> idx) const {
    Index key(idx.begin(), idx.end());
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const SparseEntry& a, const Index& k) { return a.idx < k; });
    if (it == entries_.end() || it->idx != key) return npos;
    return static_cast<std::size_t>(it - entries_.begin());
}

DenseTensor dense_from_sparse(const SparseSupportTensor& s) {
    Shape shape = Shape::cube(s.n(), s.order());
    std::vector<double> v(shape.size(), 0.0);
    for (const SparseEntry& e : s.entries()) {
        Index p = e.idx;
        do {
            v[shape.flat(p)] = e.value;
        } while (std::next_permutation(p.begin() + 1, p.end()));
    }
    return DenseTensor(shape, std::move(v), true);
}

SparseSupportTensor sparse_from_dense(const DenseTensor& t) {
    const std::size_t n = t.n();
    if (!is_tail_symmetric(t)) throw SymmetryError("sparse_from_dense requires a partially symmetric tensor");
    std::vector<SparseEntry> entries;
    Index idx(t.order(), 0);
    do {
        if (!std::is_sorted(idx.begin() + 1, idx.end())) continue;
        const double v = t(idx);
        if (v < 0.0) throw DomainError("negative entry");
        if (v > 0.0) entries.push_back({idx, v});
    } while (t.shape().next(idx));
    return SparseSupportTensor(n, t.order(), std::move(entries));
}

Vector contract_except(const DenseTensor& t, const std::vector<Vector>& xs, std::size_t mode) {
    const Shape& s = t.shape();
    Vector out = Vector::Zero(static_cast<Eigen::Index>(s.dim(mode)));
    Index idx(s.order(), 0);
    std::size_t f = 0;
    do {
        const double v = t[f++];
        if (v == 0.0) continue;
        double p = v;
        for (std::size_t k = 0; k < s.order(); ++k)
            if (k != mode) p *= xs[k][static_cast<Eigen::Index>(idx[k])];
        out[static_cast<Eigen::Index>(idx[mode])] += p;
    } while (s.next(idx));
    return out;
}

double contract_all(const DenseTensor& t, const std::vector<Vector>& xs) {
    Vector r = contract_except(t, xs, 0);
    return r.dot(xs[0]);
}

}  // namespace tenspec
