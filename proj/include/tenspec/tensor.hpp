#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tenspec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = std::vector<std::size_t>;

class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<std::size_t> dims);
    static Shape cube(std::size_t n, std::size_t d);

    std::size_t order() const { return dims_.size(); }
    std::size_t dim(std::size_t k) const { return dims_[k]; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t size() const { return size_; }
    bool equidimensional() const;

    std::size_t flat(std::span<const std::size_t> idx) const;
    Index unflat(std::size_t flat) const;
    // advance idx in row-major order; false after the last index
    bool next(Index& idx) const;

    bool operator==(const Shape& o) const { return dims_ == o.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

class DenseTensor {
public:
    DenseTensor() = default;
    DenseTensor(Shape shape, std::vector<double> values, bool partially_symmetric = false);

    static DenseTensor zeros(const Shape& shape);
    static DenseTensor identity(std::size_t n, std::size_t d);
    static DenseTensor ones(std::size_t n, std::size_t d);
    static DenseTensor from_matrix(const Matrix& m);

    const Shape& shape() const { return shape_; }
    std::size_t order() const { return shape_.order(); }
    // common dimension; throws unless equidimensional
    std::size_t n() const;
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    bool partially_symmetric() const { return partially_symmetric_; }

    double operator()(std::span<const std::size_t> idx) const { return values_[shape_.flat(idx)]; }
    double at(std::initializer_list<std::size_t> idx) const;
    double operator[](std::size_t flat) const { return values_[flat]; }

    double max_entry() const;
    Matrix to_matrix() const;
    DenseTensor scaled(double c) const;
    DenseTensor with_flag(bool partially_symmetric) const;

private:
    Shape shape_;
    std::vector<double> values_;
    bool partially_symmetric_ = false;
};

struct SparseEntry {
    Index idx;  // 0-based, tail sorted
    double value;
};

class SparseSupportTensor {
public:
    SparseSupportTensor(std::size_t n, std::size_t d, std::vector<SparseEntry> entries);

    std::size_t n() const { return n_; }
    std::size_t order() const { return d_; }
    const std::vector<SparseEntry>& entries() const { return entries_; }
    // entries grouped by first index, each group in lexicographic order
    const std::vector<std::vector<std::size_t>>& by_state() const { return by_state_; }
    std::size_t find(std::span<const std::size_t> idx) const;  // npos if absent

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<SparseEntry> entries_;
    std::vector<std::vector<std::size_t>> by_state_;
};

struct Violation {
    Index idx;
    std::string rule;
};

std::vector<Violation> validate(const DenseTensor& t);
bool is_tail_symmetric(const DenseTensor& t);
bool is_symmetric(const DenseTensor& t);

DenseTensor symmetrize_tail(const DenseTensor& t);
Vector apply(const DenseTensor& t, const Vector& x);
Matrix differential(const DenseTensor& t, const Vector& x);
DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b);
DenseTensor hadamard_power(const DenseTensor& t, double s);
DenseTensor kronecker(const DenseTensor& a, const DenseTensor& b);
DenseTensor pattern(const DenseTensor& t);
DenseTensor diag_scale(const Vector& y, const DenseTensor& t);
DenseTensor add(const DenseTensor& a, const DenseTensor& b, double beta = 1.0);
DenseTensor outer(const DenseTensor& a, const DenseTensor& b);
DenseTensor permute_labels(const DenseTensor& t, const std::vector<std::size_t>& perm);

DenseTensor dense_from_sparse(const SparseSupportTensor& s);
SparseSupportTensor sparse_from_dense(const DenseTensor& t);

// contraction of every mode except `mode` against xs[k]
Vector contract_except(const DenseTensor& t, const std::vector<Vector>& xs, std::size_t mode);
double contract_all(const DenseTensor& t, const std::vector<Vector>& xs);

// number of tail positions equal to j
std::size_t tail_count(std::span<const std::size_t> idx, std::size_t j);
// size of the orbit of idx under tail permutations
std::size_t orbit_size(std::span<const std::size_t> idx);

}  // namespace tenspec
