#pragma once

#include <string>
#include <vector>

#include "wrinkle/characteristics.hpp"
#include "wrinkle/field.hpp"
#include "wrinkle/stablelines.hpp"

namespace wrinkle {

// nine significant digits, no locale
std::string fmt9(double v);

// World coordinates mapped onto a pixel canvas with y pointing up.
class SvgCanvas {
public:
    explicit SvgCanvas(Box world, double width_px = 800.0, double margin_px = 20.0);

    Point2 map(Point2 x) const;
    double scale() const { return scale_; }
    void line(Point2 a, Point2 b, const std::string& stroke, double width, double opacity = 1.0);
    void polyline(const std::vector<Point2>& pts, const std::string& stroke, double width, bool closed,
                  const std::string& fill = "none");
    void cell(Point2 lo, Point2 hi, const std::string& fill);
    void dot(Point2 c, double radius_px, const std::string& fill);
    void raw(const std::string& element) { body_ += element; }
    std::string str() const;

private:
    Box world_;
    double scale_, margin_, width_, height_;
    std::string body_;
};

// stable lines at 0.6, the singular set at 2.0, the outline at 1.2; U left blank
std::string pattern_svg(const Domain& domain, const Partition& part, const StableLineFamily& family);
std::string defect_svg(const DefectField& defect, const StableLineFamily& family);
// contours of w at 0 and +-half the peak
std::string contour_svg(const DisplacementField& field, const Domain& domain);

std::string viridis(double t);

void write_text(const std::string& path, const std::string& text);
void write_pattern_csv(const std::string& path, const StableLineFamily& family);
void write_medial_csv(const std::string& path, const MedialAxis& axis);
void write_defect_csv(const std::string& path, const DefectField& defect);
void write_heightmap_csv(const std::string& path, const DisplacementField& field);

}  // namespace wrinkle
