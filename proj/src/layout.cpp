/*******************************************************************************
 * Copyright 2026 wcetlab contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

#include "wcetlab/layout.hpp"

#include <algorithm>
#include <sstream>

namespace wcetlab {

CyclesByWidth default_timing(RegionKind kind) {
    if (kind == RegionKind::Scratchpad)
        return {1, 1, 1};
    return {2, 2, 4};
}

const MemoryRegion &MemoryLayout::region(const std::string &name) const {
    for (const auto &r : regions)
        if (r.name == name)
            return r;
    throw layout_error("unknown region '" + name + "'");
}

std::uint64_t MemoryLayout::address_of(const std::string &object, std::uint64_t offset) const {
    auto it = placement.find(object);
    if (it == placement.end())
        throw layout_error("object '" + object + "' is not placed");
    return it->second.start + offset;
}

const MemoryRegion &MemoryLayout::region_of(const std::string &object) const {
    auto it = placement.find(object);
    if (it == placement.end())
        throw layout_error("object '" + object + "' is not placed");
    return region(it->second.region);
}

MemoryLayout assign_layout(const Program &p, const std::set<std::string> &selection,
                           const LayoutConfig &config) {
    std::uint64_t selected_size = 0;
    for (const auto &id : selection)
        selected_size += p.object(id).size;
    if (selected_size > config.spm_capacity)
        throw layout_error("scratchpad capacity exceeded: need " + std::to_string(selected_size) +
                           " bytes, have " + std::to_string(config.spm_capacity));

    MemoryLayout layout;
    std::uint64_t spm_cursor = config.spm_base;
    std::uint64_t main_cursor = config.main_base;

    if (config.spm_capacity > 0) {
        MemoryRegion spm;
        spm.name = "scratchpad";
        spm.base = config.spm_base;
        spm.limit = config.spm_base + config.spm_capacity - 1;
        spm.cycles = default_timing(RegionKind::Scratchpad);
        spm.read_only = false;
        spm.content = RegionContent::CodeAndData;
        layout.regions.push_back(spm);
        layout.spm_region = "scratchpad";
    }

    // scratchpad: declaration order
    for (const auto &o : p.objects) {
        if (!selection.count(o.id))
            continue;
        layout.placement[o.id] = {"scratchpad", spm_cursor};
        spm_cursor += o.size;
    }
    // main memory: code, then literal pools, then data, declaration order within
    auto place_main = [&](ObjectKind kind) {
        for (const auto &o : p.objects) {
            if (o.kind != kind || selection.count(o.id))
                continue;
            layout.placement[o.id] = {"main", main_cursor};
            main_cursor += o.size;
        }
    };
    place_main(ObjectKind::FunctionCode);
    place_main(ObjectKind::LiteralPool);
    place_main(ObjectKind::GlobalData);

    MemoryRegion main_mem;
    main_mem.name = "main";
    main_mem.base = config.main_base;
    main_mem.limit = std::max(main_cursor, config.main_base + 1) - 1;
    main_mem.cycles = default_timing(RegionKind::Main);
    main_mem.read_only = false;
    main_mem.content = RegionContent::CodeAndData;
    layout.regions.push_back(main_mem);

    if (config.spm_base < config.main_base && spm_cursor > config.main_base)
        throw layout_error("address-space overflow: scratchpad runs into main memory");
    if (config.main_base < config.spm_base && main_cursor > config.spm_base)
        throw layout_error("address-space overflow: main memory runs into scratchpad");
    return layout;
}

int access_cost(const MemoryLayout &layout, const AccessEvent &event) {
    return layout.region_of(event.object).cycles.at(event.width);
}

namespace {

int object_cycles(const MemoryObject &o, const MemoryRegion &r) {
    int width = o.kind == ObjectKind::FunctionCode ? 16
                : o.kind == ObjectKind::LiteralPool ? 32
                                                    : o.element_width;
    return r.cycles.at(width);
}

} // namespace

std::vector<AnnotationArea> annotation_areas(const Program &p, const MemoryLayout &layout) {
    std::vector<AnnotationArea> areas;
    for (const auto &[id, place] : layout.placement) {
        const auto &o = p.object(id);
        const auto &r = layout.region(place.region);
        AnnotationArea a;
        a.start = place.start;
        a.end = place.start + o.size - 1;
        a.cycles = object_cycles(o, r);
        a.read_only = o.kind != ObjectKind::GlobalData;
        if (layout.spm_region && place.region == *layout.spm_region)
            a.content = RegionContent::CodeAndData;
        else
            a.content = o.kind == ObjectKind::FunctionCode ? RegionContent::CodeOnly
                                                           : RegionContent::DataOnly;
        areas.push_back(a);
    }
    std::sort(areas.begin(), areas.end(),
              [](const AnnotationArea &x, const AnnotationArea &y) { return x.start < y.start; });
    // merge adjacent areas with identical timing and attributes
    std::vector<AnnotationArea> merged;
    for (const auto &a : areas) {
        if (!merged.empty() && merged.back().end + 1 == a.start &&
            merged.back().cycles == a.cycles && merged.back().read_only == a.read_only &&
            merged.back().content == a.content) {
            merged.back().end = a.end;
        } else {
            merged.push_back(a);
        }
    }
    return merged;
}

namespace {

const char *rw_token(bool read_only) { return read_only ? "READ-ONLY" : "READ&WRITE"; }

const char *content_token(RegionContent c) {
    switch (c) {
    case RegionContent::CodeOnly: return "CODE-ONLY";
    case RegionContent::DataOnly: return "DATA-ONLY";
    default: return "CODE&DATA";
    }
}

} // namespace

std::string render_annotation(const std::vector<AnnotationArea> &areas) {
    std::ostringstream out;
    for (const auto &a : areas) {
        out << "MEMORY_AREA: 0x" << std::hex << a.start << " 0x" << a.end << std::dec << " 1:1 "
            << a.cycles << ' ' << rw_token(a.read_only) << ' ' << content_token(a.content) << '\n';
    }
    return out.str();
}

std::string emit_annotation(const Program &p, const MemoryLayout &layout) {
    return render_annotation(annotation_areas(p, layout));
}

std::vector<AnnotationArea> parse_annotation(const std::string &text) {
    std::vector<AnnotationArea> areas;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ss >> tok) {
            if (tok[0] == '#')
                break;
            toks.push_back(tok);
        }
        if (toks.empty())
            continue;
        if (toks[0] != "MEMORY_AREA:" || toks.size() != 7)
            throw parse_error(lineno, "malformed MEMORY_AREA line");
        AnnotationArea a;
        try {
            a.start = std::stoull(toks[1], nullptr, 16);
            a.end = std::stoull(toks[2], nullptr, 16);
            a.cycles = std::stoi(toks[4]);
        } catch (const std::exception &) {
            throw parse_error(lineno, "malformed number in MEMORY_AREA line");
        }
        if (toks[3] != "1:1")
            throw parse_error(lineno, "unsupported clock ratio '" + toks[3] + "'");
        if (a.start > a.end)
            throw parse_error(lineno, "area start exceeds end");
        if (a.cycles < 1)
            throw parse_error(lineno, "area cycles must be >= 1");
        if (toks[5] == "READ-ONLY" || toks[5] == "READONLY")
            a.read_only = true;
        else if (toks[5] == "READ&WRITE" || toks[5] == "READWRITE" || toks[5] == "READ-WRITE")
            a.read_only = false;
        else
            throw parse_error(lineno, "unknown access attribute '" + toks[5] + "'");
        if (toks[6] == "CODE-ONLY" || toks[6] == "CODEONLY")
            a.content = RegionContent::CodeOnly;
        else if (toks[6] == "DATA-ONLY" || toks[6] == "DATAONLY")
            a.content = RegionContent::DataOnly;
        else if (toks[6] == "CODE&DATA")
            a.content = RegionContent::CodeAndData;
        else
            throw parse_error(lineno, "unknown content attribute '" + toks[6] + "'");
        areas.push_back(a);
    }
    return areas;
}

std::vector<MemoryRegion> annotation_regions(const std::vector<AnnotationArea> &areas) {
    std::vector<MemoryRegion> regions;
    for (const auto &a : areas) {
        MemoryRegion r;
        r.name = "area_" + std::to_string(regions.size());
        r.base = a.start;
        r.limit = a.end;
        r.cycles = {a.cycles, a.cycles, a.cycles};
        r.read_only = a.read_only;
        r.content = a.content;
        regions.push_back(r);
    }
    return regions;
}

} // namespace wcetlab
