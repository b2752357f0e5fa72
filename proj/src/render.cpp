#include "pitchlog/render.hpp"

#include "pitchlog/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>

namespace pitchlog {

namespace {

constexpr std::array<std::string_view, 10> kPalette = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                                                        "#a65628", "#f781bf", "#999999", "#66c2a5", "#b8860b"};

std::string dot_escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string type_color(const RenderOptions& opts, const std::string& type, std::size_t fallback_index) {
    const auto it = opts.type_colors.find(type);
    if (it != opts.type_colors.end()) {
        return it->second;
    }
    return std::string(kPalette[fallback_index % kPalette.size()]);
}

} // namespace

std::string dfg_to_dot(const OcDfg& g, const RenderOptions& opts) {
    std::map<std::string, std::size_t> activities;
    for (const auto& [type, dfg] : g.types) {
        for (const auto& [activity, stats] : dfg.nodes) {
            auto& n = activities[activity];
            n = std::max(n, stats.events);
        }
    }
    std::string out = "digraph ocdfg {\n";
    out += "  rankdir=LR;\n";
    out += "  node [shape=box, style=\"rounded,filled\", fillcolor=\"#f5f5f5\", fontname=\"Helvetica\"];\n";
    out += "  edge [fontname=\"Helvetica\", fontsize=10];\n";
    for (const auto& [activity, count] : activities) {
        const auto label = opts.node_counts ? fmt::format("{} ({})", activity, count) : activity;
        out += fmt::format("  \"{}\" [label=\"{}\"];\n", dot_escape(activity), dot_escape(label));
    }
    std::size_t type_index = 0;
    for (const auto& [type, dfg] : g.types) {
        const auto color = type_color(opts, type, type_index++);
        for (const auto& [pair, count] : dfg.edges) {
            out += fmt::format("  \"{}\" -> \"{}\" [", dot_escape(pair.first), dot_escape(pair.second));
            if (opts.edge_labels) {
                out += fmt::format("label=\"{}:{}\", ", dot_escape(type), count);
            }
            out += fmt::format("color=\"{}\", fontcolor=\"{}\"];\n", color, color);
        }
    }
    out += "}\n";
    return out;
}

namespace {

const OcelObject& find_possession(const ObjectIndex& index, std::string_view possession_id) {
    std::string id(possession_id);
    if (!id.starts_with("possession:")) {
        id = "possession:" + id;
    }
    const auto* o = index.find(id);
    if (o == nullptr || o->type != object_type::kPossession) {
        throw LookupError("unknown possession id '" + std::string(possession_id) + "'");
    }
    return *o;
}

std::optional<NormalizedPoint> event_point(const OcelEvent& e, const ObjectIndex& index, const GridSpec& spec,
                                           std::optional<GridCell>& cell) {
    const auto x = attr_get<double>(e.attrs, "x");
    const auto y = attr_get<double>(e.attrs, "y");
    if (x && y) {
        const NormalizedPoint p{*x, *y};
        cell = cell_of(p, spec);
        return p;
    }
    for (const auto q : {qualifier::kToCell, qualifier::kAtCell}) {
        for (const auto& r : e.relations) {
            if (r.qualifier != q) {
                continue;
            }
            const auto* o = index.find(r.object_id);
            if (o == nullptr) {
                continue;
            }
            const auto label = attr_get<std::string>(o->attrs, "label");
            if (const auto c = label ? parse_cell_label(*label, spec) : std::nullopt) {
                cell = c;
                return cell_center(*c, spec);
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<InstanceTrace> instance_traces(const OcelLog& log, std::string_view possession_id,
                                           const std::set<std::string>& types, const GridSpec& spec,
                                           const RenderOptions& opts) {
    const ObjectIndex index(log);
    const auto& possession = find_possession(index, possession_id);
    const auto team = attr_get<std::string>(possession.attrs, "team");

    std::map<std::string, InstanceTrace> traces;
    for (const auto& e : log.events) {
        const bool in_possession = std::any_of(e.relations.begin(), e.relations.end(),
                                               [&](const Relation& r) { return r.object_id == possession.id; });
        if (!in_possession) {
            continue;
        }
        std::optional<GridCell> cell;
        const auto point = event_point(e, index, spec, cell);
        if (!point) {
            continue;
        }
        std::set<std::string_view> seen;
        for (const auto& r : e.relations) {
            const auto* o = index.find(r.object_id);
            if (o == nullptr || !types.contains(o->type) || o->id == possession.id || !seen.insert(o->id).second) {
                continue;
            }
            if (opts.team_only && o->type == object_type::kPlayer && attr_get<std::string>(o->attrs, "side") != team) {
                continue;
            }
            auto& t = traces[o->id];
            t.object_id = o->id;
            t.object_type = o->type;
            t.events.push_back({e.id, e.activity, *point, *cell});
        }
    }
    std::vector<InstanceTrace> out;
    for (auto& [id, t] : traces) {
        out.push_back(std::move(t));
    }
    // Ball first, then by type and id.
    std::stable_sort(out.begin(), out.end(), [](const InstanceTrace& a, const InstanceTrace& b) {
        const bool ab = a.object_type == object_type::kBall;
        const bool bb = b.object_type == object_type::kBall;
        if (ab != bb) {
            return ab;
        }
        return std::tie(a.object_type, a.object_id) < std::tie(b.object_type, b.object_id);
    });
    return out;
}

std::string spatial_instance_svg(const OcelLog& log, std::string_view possession_id,
                                 const std::set<std::string>& types, const GridSpec& spec,
                                 const RenderOptions& opts) {
    const auto traces = instance_traces(log, possession_id, types, spec, opts);

    constexpr double margin = 30.0;
    constexpr double legend_row = 18.0;
    const double pw = opts.width - 2 * margin;
    const double ph = opts.height - 2 * margin;
    const double total_h = opts.height + legend_row * static_cast<double>(traces.size()) + 10.0;
    // Provider y already grows downward, so row 1 lands at the bottom of the drawing.
    const auto sx = [&](double x) { return margin + x * pw; };
    const auto sy = [&](double y) { return margin + y * ph; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{:.0f}\" "
                       "viewBox=\"0 0 {} {:.0f}\">\n",
                       opts.width, total_h, opts.width, total_h);
    std::string pid(possession_id);
    if (pid.starts_with("possession:")) {
        pid.erase(0, 11);
    }
    out += fmt::format("<title>possession {}</title>\n", xml_escape(pid));

    std::vector<std::string> colors;
    std::size_t player_index = 0;
    for (const auto& t : traces) {
        if (t.object_type == object_type::kBall) {
            colors.emplace_back("#000000");
        } else {
            colors.emplace_back(kPalette[player_index++ % kPalette.size()]);
        }
    }

    out += "<defs>\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
        out += fmt::format("  <marker id=\"arrow-{}\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
                           "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"{}\"/></marker>\n",
                           i, colors[i]);
    }
    out += "</defs>\n";

    out += fmt::format("<rect class=\"pitch\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
                       "fill=\"#3a7d44\" stroke=\"#ffffff\" stroke-width=\"2\"/>\n",
                       margin, margin, pw, ph);
    out += "<g class=\"grid\">\n";
    if (opts.grid_lines) {
        for (int c = 1; c < spec.cols; ++c) {
            const double x = sx(static_cast<double>(c) / spec.cols);
            out += fmt::format("  <line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ffffff\" "
                               "stroke-opacity=\"0.6\"/>\n",
                               x, sy(0.0), x, sy(1.0));
        }
        for (int r = 1; r < spec.rows; ++r) {
            const double y = sy(static_cast<double>(r) / spec.rows);
            out += fmt::format("  <line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ffffff\" "
                               "stroke-opacity=\"0.6\"/>\n",
                               sx(0.0), y, sx(1.0), y);
        }
    }
    for (int c = 0; c < spec.cols; ++c) {
        for (int r = 0; r < spec.rows; ++r) {
            const GridCell cell{c, r};
            const auto centre = cell_center(cell, spec);
            out += fmt::format("  <text class=\"cell-label\" x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"Helvetica\" "
                               "font-size=\"12\" fill=\"#ffffff\" fill-opacity=\"0.7\">{}</text>\n",
                               sx(centre.x - 0.5 / spec.cols) + 4.0, sy(centre.y + 0.5 / spec.rows) - 4.0,
                               cell_label(cell));
        }
    }
    out += "</g>\n";

    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& t = traces[i];
        const bool ball = t.object_type == object_type::kBall;
        out += fmt::format("<g class=\"trace\" data-object=\"{}\" data-type=\"{}\">\n", xml_escape(t.object_id),
                           xml_escape(t.object_type));
        for (std::size_t k = 1; k < t.events.size(); ++k) {
            const auto& a = t.events[k - 1].point;
            const auto& b = t.events[k].point;
            out += fmt::format("  <line class=\"arrow\" x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" "
                               "stroke=\"{}\" stroke-width=\"{}\"{} marker-end=\"url(#arrow-{})\"/>\n",
                               sx(a.x), sy(a.y), sx(b.x), sy(b.y), colors[i], ball ? 3 : 1.5,
                               ball ? "" : " stroke-dasharray=\"5,3\"", i);
        }
        for (const auto& e : t.events) {
            out += fmt::format("  <circle class=\"event\" cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"{}\" fill=\"{}\" "
                               "data-event=\"{}\" data-activity=\"{}\" data-cell=\"{}\"><title>{} ({})</title>"
                               "</circle>\n",
                               sx(e.point.x), sy(e.point.y), ball ? 5 : 3.5, colors[i], xml_escape(e.event_id),
                               xml_escape(e.activity), cell_label(e.cell), xml_escape(e.activity),
                               cell_label(e.cell));
        }
        out += "</g>\n";
    }

    out += "<g class=\"legend\" font-family=\"Helvetica\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const double y = opts.height + legend_row * static_cast<double>(i);
        out += fmt::format("  <line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" "
                           "stroke-width=\"3\"/><text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n",
                           margin, y - 4.0, margin + 24.0, y - 4.0, colors[i], margin + 30.0, y,
                           xml_escape(traces[i].object_id));
    }
    out += "</g>\n</svg>\n";
    return out;
}

} // namespace pitchlog
