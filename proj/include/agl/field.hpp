#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agl/symmetry.hpp"

namespace agl {

/// Planar vector field sampled on a uniform polar patch.
///
/// Nodes sit at r_i = r_lo + i*dr (i = 0..nr) and theta_j = j*dtheta
/// (j = 0..ncols-1). Columns continue past the stored range by the twisted
/// wrap rule u(r, theta + span) = R(twist) u(r, theta), which covers
///   - full disks:            span = 2 pi, twist = 0
///   - fundamental sectors:   span = pi/n, twist = d pi/n (class d, n = 1-d)
///   - other twisted patches such as degree-1 radial fields.
/// For patches with r_lo = 0 the row i = 0 is the origin, stored once per
/// column but kept identical across columns.
struct Field2D {
    double r_lo = 0.0;
    double r_hi = 1.0;
    int nr = 0;
    int ncols = 0;
    double span = 2.0 * M_PI;
    double twist = 0.0;
    int turns = 1;  // angular copies composing the full disk: 2 pi / span

    std::optional<SymmetryClass> cls;
    double delta_meta = 0.0;

    std::vector<Vec2> data;

    static Field2D sector(const SymmetryClass& cls, double R, int Nr, int Ntheta);
    static Field2D disk(double R, int Nr, int Mtheta);
    static Field2D annulus(double r_lo, double r_hi, int Nr, int Mtheta);
    /// Twisted patch covering span = 2 pi / turns with u(theta + span) =
    /// R(twist) u(theta); used for radial fields of positive degree.
    static Field2D twisted_patch(double R, int Nr, int Ntheta, int turns, double twist);

    double dr() const { return (r_hi - r_lo) / nr; }
    double dtheta() const { return span / ncols; }
    double node_r(int i) const { return r_lo + i * dr(); }
    double node_theta(int j) const { return j * dtheta(); }
    bool has_origin() const { return r_lo == 0.0; }
    bool is_sector() const { return turns > 1; }

    /// +1 when div/curl continue periodically across the wrap, -1 when they
    /// flip sign (the case mu(r) = sigma r of the dihedral classes).
    int scalar_wrap_sign() const;

    const Vec2& at(int i, int j) const { return data[static_cast<size_t>(i) * ncols + j]; }
    Vec2& at(int i, int j) { return data[static_cast<size_t>(i) * ncols + j]; }

    /// Value at node (i, j) for any integer j, applying the wrap rule.
    Vec2 value(int i, int j) const;

    Vec2 origin() const { return at(0, 0); }
    void set_origin(const Vec2& v);

    void check_shape(int min_nr = 1, int min_ncols = 1) const;
};

/// Equivariant extension of a sector (or twisted patch) to the full disk;
/// disks pass through unchanged.
Field2D extend_to_disk(const Field2D& f);

/// Inverse of extend_to_disk for a disk grid commensurate with the class.
Field2D restrict_to_sector(const Field2D& disk, const SymmetryClass& cls);

/// x -> mu(g)^{-1} u(g x) on a full-disk grid. The angular sample count
/// must be a multiple of 4n so g permutes grid nodes exactly.
Field2D act(const SymmetryClass& cls, const GroupElement& g, const Field2D& field);

/// Max over grid nodes and over the generators (rotation r, reflection s_0)
/// of |u(gx) - mu(g) u(x)|.
double equivariance_residual(const SymmetryClass& cls, const Field2D& field);

/// Group average (1/|G|) sum_g mu(g)^{-1} u(g x): the orthogonal projection
/// onto the mu-equivariant subspace. Fixed summation order.
Field2D symmetrize(const SymmetryClass& cls, const Field2D& field);

/// Projection onto the reflection constraint of a sector field (the
/// rotation constraint is already built into the sector storage).
void project_reflection(Field2D& sector);

double reflection_residual(const Field2D& sector);

/// Trace on the stored ring i (extended over the full circle).
CircleTrace ring_trace(const Field2D& f, int i);

/// Cartesian gradient matrices G, G[row=component][col=derivative], at all
/// nodes. Centered differences; one-sided second order at the radial ends;
/// rows at r = 0 copy the first ring (only used by interpolation close to
/// the origin, where the affected area vanishes).
std::vector<Mat2> node_gradients(const Field2D& f);

/// Bilinear interpolation of the field (and optionally of precomputed node
/// matrices) in polar grid coordinates.
class FieldSampler {
  public:
    explicit FieldSampler(const Field2D& f, bool with_gradients = true);

    Vec2 value(double r, double theta) const;
    Mat2 gradient(double r, double theta) const;
    double max_radius() const { return f_.r_hi; }
    const Field2D& field() const { return f_; }

    /// Uniform trace at radius s with m samples over [0, 2 pi).
    CircleTrace circle(double s, int m) const;

  private:
    const Field2D& f_;
    std::vector<Mat2> grads_;
};

/// Sector field CSV: "# d=.. sign=.. delta=.. R=.. Nr=.. Ntheta=.." header,
/// a column header, one origin row, then rows i,j,r,theta,u1,u2 with the
/// glued column j = Ntheta included. Readers verify the origin, gluing and
/// reflection invariants and reject violating files.
std::string field_to_csv(const Field2D& f);
void write_field_csv(const Field2D& f, const std::string& path);
Field2D field_from_csv(const std::string& content);
Field2D read_field_csv(const std::string& path);

}  // namespace agl
