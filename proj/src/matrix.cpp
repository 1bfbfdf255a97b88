#include "regretfolio/matrix.hpp"

#include <Eigen/Eigenvalues>

#include "regretfolio/error.hpp"

namespace regretfolio {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.front().size() : 0;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
    return out;
}

Matrix scaled(const Matrix& m, double factor) {
    Matrix out = m;
    for (double& v : out.data()) v *= factor;
    return out;
}

namespace {

Eigen::VectorXd eigenvalues(const Matrix& m) {
    if (!m.square()) throw Error(ErrorCode::DimensionMismatch, "eigenvalues of non-square matrix");
    const auto n = static_cast<Eigen::Index>(m.rows());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
        m.data().data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(view, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace

double min_eigenvalue(const Matrix& symmetric) { return eigenvalues(symmetric).minCoeff(); }

double max_eigenvalue(const Matrix& symmetric) { return eigenvalues(symmetric).maxCoeff(); }

}  // namespace regretfolio
