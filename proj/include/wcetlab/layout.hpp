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

#ifndef WCETLAB_LAYOUT_HPP
#define WCETLAB_LAYOUT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wcetlab/program.hpp"

namespace wcetlab {

struct layout_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Total cycles (access + waitstates) per access width.
struct CyclesByWidth {
    int c8 = 1, c16 = 1, c32 = 1;
    int at(int width) const {
        switch (width) {
        case 8: return c8;
        case 16: return c16;
        case 32: return c32;
        default: throw layout_error("unsupported access width " + std::to_string(width));
        }
    }
    bool operator==(const CyclesByWidth &) const = default;
};

enum class RegionKind { Scratchpad, Main };

/// Board-level timing defaults: scratchpad 1 cycle at any width, main memory
/// 2/2/4 cycles for 8/16/32 bit accesses.
CyclesByWidth default_timing(RegionKind kind);

enum class RegionContent { CodeOnly, DataOnly, CodeAndData };

struct MemoryRegion {
    std::string name;
    std::uint64_t base = 0;
    std::uint64_t limit = 0;  // inclusive
    CyclesByWidth cycles;
    bool read_only = true;
    RegionContent content = RegionContent::CodeAndData;
    bool operator==(const MemoryRegion &) const = default;
};

struct Placement {
    std::string region;
    std::uint64_t start = 0;
};

struct MemoryLayout {
    std::vector<MemoryRegion> regions;
    std::map<std::string, Placement> placement;  // object id -> placement
    std::optional<std::string> spm_region;

    const MemoryRegion &region(const std::string &name) const;
    std::uint64_t address_of(const std::string &object, std::uint64_t offset) const;
    const MemoryRegion &region_of(const std::string &object) const;
};

struct LayoutConfig {
    std::uint64_t main_base = 0x00100000;
    std::uint64_t spm_base = 0x00400000;
    std::uint64_t spm_capacity = 0;
};

/// Place the selected objects contiguously in scratchpad (declaration order)
/// and everything else contiguously in main memory, code first, then literal
/// pools, then data.
MemoryLayout assign_layout(const Program &p, const std::set<std::string> &selection,
                           const LayoutConfig &config);

/// Cycle cost of one event under pure region timing; offset-independent.
int access_cost(const MemoryLayout &layout, const AccessEvent &event);

/// One annotation area: a maximal address range with one access time.
struct AnnotationArea {
    std::uint64_t start = 0;
    std::uint64_t end = 0;  // inclusive
    int cycles = 1;
    bool read_only = true;
    RegionContent content = RegionContent::CodeAndData;
    bool operator==(const AnnotationArea &) const = default;
};

std::vector<AnnotationArea> annotation_areas(const Program &p, const MemoryLayout &layout);
std::string render_annotation(const std::vector<AnnotationArea> &areas);
std::string emit_annotation(const Program &p, const MemoryLayout &layout);
std::vector<AnnotationArea> parse_annotation(const std::string &text);

/// Annotation areas as width-uniform MemoryRegions.
std::vector<MemoryRegion> annotation_regions(const std::vector<AnnotationArea> &areas);

} // namespace wcetlab

#endif
