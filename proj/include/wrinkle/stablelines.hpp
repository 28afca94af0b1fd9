#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wrinkle/airy.hpp"
#include "wrinkle/geometry.hpp"
#include "wrinkle/grid.hpp"

namespace wrinkle {

enum class RegionLabel : std::uint8_t { outside = 0, sigma, flattened, ordered, unconstrained };
const char* to_string(RegionLabel l);

// Convex polygon (counter-clockwise) or axis-aligned ellipse.
struct ConvexRegion {
    enum class Kind { whole, polygon, ellipse } kind = Kind::whole;
    std::vector<Point2> polygon;
    Point2 center{};
    double a = 0.0, b = 0.0;

    static ConvexRegion make_polygon(std::vector<Point2> pts);
    static ConvexRegion make_ellipse(Point2 c, double a, double b);
    bool contains(Point2 x, double tol = 0.0) const;
    // parameter interval of the line p + t u inside the region
    std::optional<std::pair<double, double>> chord(Point2 p, Vec2 u) const;
    // range of n . x over the region
    std::pair<double, double> support(Vec2 n) const;
};

struct Region {
    std::string name;
    RegionLabel label = RegionLabel::ordered;
    ConvexRegion shape;  // kind whole means the entire domain
};

class Partition {
public:
    Partition(Domain domain, AirySign sign, std::vector<Region> regions);

    const Domain& domain() const { return domain_; }
    const std::vector<Region>& regions() const { return regions_; }
    // index into regions(), or -1 on the medial axis / outside
    int region_index(Point2 x) const;
    RegionLabel label_at(Point2 x) const;
    bool has_sigma() const { return sign_ == AirySign::minus; }
    const MedialAxis& sigma() const { return domain_.medial_axis(); }
    bool is_empty(RegionLabel l) const;
    // segments separating regions inside the domain
    std::vector<MedialSegment> interfaces() const;
    // one label per grid cell, by cell centre; cells meeting the medial axis are sigma
    std::vector<RegionLabel> mask(const MaskedGrid& grid) const;

private:
    Domain domain_;
    AirySign sign_;
    std::vector<Region> regions_;
};

Partition partition(const Domain& domain, const AiryField& airy);

enum class EndKind { boundary, medial_axis, focal_point, corner, interface };
const char* to_string(EndKind k);
enum class RhoKind { constant, proportional_to_r, general };
const char* to_string(RhoKind k);
enum class DataKind { two_point_bvp, cauchy };
const char* to_string(DataKind k);

struct StableLine {
    Point2 start{}, end{};
    Vec2 eta{1.0, 0.0};  // perp(eta) points from start to end
    EndKind start_kind = EndKind::boundary;
    EndKind end_kind = EndKind::boundary;
    double index = 0.0;
    int group = 0;
    int sub = 0;

    double length() const { return norm(end - start); }
    Vec2 direction() const { return (end - start) / length(); }
    Point2 at(double t) const { return start + t * direction(); }
};

// Coordinates of the continuum line through a point.
struct LineCoord {
    int sub = 0;
    double s = 0.0;       // index along the indexing curve
    double t = 0.0;       // distance from the start
    double length = 0.0;  // line length
    Vec2 eta{1.0, 0.0};
};

class LineGroup {
public:
    virtual ~LineGroup() = default;
    virtual std::string name() const = 0;
    virtual DataKind data_kind() const = 0;
    virtual RhoKind rho_kind() const = 0;
    virtual bool unconstrained() const { return false; }
    virtual std::optional<LineCoord> locate(Point2 x) const = 0;
    virtual std::optional<StableLine> line_at(int sub, double s) const = 0;
    // sampled (sub, s) pairs at the given arclength spacing
    virtual std::vector<std::pair<int, double>> lattice(double spacing) const = 0;
    // unnormalised change-of-measure factor at distance t from the start
    virtual double rho_raw(int, double, double) const { return 1.0; }
    // period of s for closed indexing curves, 0 otherwise
    virtual double period(int) const { return 0.0; }
    // region covered by the group when it is polygonal
    virtual const ConvexRegion* region() const { return nullptr; }
};

struct RhoSample {
    double value = 1.0;
    bool singular = false;
};

// How the unconstrained set U is filled with chords.
struct UDecomposition {
    enum class Kind { parallel, random, mixture, chords } kind = Kind::parallel;
    double angle = 0.0;
    double angle2 = pi / 2;  // mixture
    double weight = 0.5;     // mixture weight of the first angle
    std::uint64_t seed = 0;  // random
    std::vector<std::pair<Point2, Point2>> chords;

    // resolved chord angle for parallel and random kinds
    double resolved_angle() const;
};

class StableLineFamily {
public:
    std::vector<std::shared_ptr<const LineGroup>> groups;
    std::vector<StableLine> lines;
    double spacing = 0.0;

    bool empty() const { return lines.empty(); }
    RhoKind rho_kind() const;
    // group index and coordinates of the line through x
    std::optional<std::pair<int, LineCoord>> locate(Point2 x) const;
    Vec2 eta(Point2 x) const;
    RhoSample rho(Point2 x) const;
};

StableLineFamily stable_lines(const Domain& domain, const AiryField& airy, double spacing,
                              const UDecomposition& u = {});
// groups only, without sampling
std::vector<std::shared_ptr<const LineGroup>> line_groups(const Domain& domain, const AiryField& airy,
                                                          const UDecomposition& u = {});

}  // namespace wrinkle
