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

#ifndef WCETLAB_PROGRAM_HPP
#define WCETLAB_PROGRAM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wcetlab {

/// Raised on malformed program files (with 1-based line number).
struct parse_error : std::runtime_error {
    int line;
    parse_error(int line_, const std::string &msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// Raised when a syntactically valid program violates an IR invariant.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ObjectKind { FunctionCode, GlobalData, LiteralPool };

/// A function, global data element or literal pool: the unit of scratchpad
/// allocation. access_count is the profile-weighted access frequency used as
/// the benefit input for allocation.
struct MemoryObject {
    std::string id;
    ObjectKind kind = ObjectKind::GlobalData;
    std::uint32_t size = 0;       // bytes
    int element_width = 32;       // bits, 8/16/32
    std::uint64_t access_count = 0;
};

/// One data-access event of a block. pos is the number of instruction fetches
/// preceding it inside the block; [lo,hi] is the inclusive byte-offset range of
/// the access inside the target object (lo == hi when the address is exact).
struct DataAccess {
    std::uint32_t pos = 0;
    std::string target;
    std::uint32_t lo = 0, hi = 0;
    int width = 32;
    bool is_write = false;
};

struct BasicBlock {
    std::string id;
    std::string owner;            // MemoryObject of kind FunctionCode
    std::uint32_t instr_count = 1;
    std::vector<DataAccess> data_accesses;   // sorted by pos
    std::vector<std::string> successors;     // <= 2
};

struct FlowFacts {
    std::string entry;
    std::set<std::string> exits;
    // back edge (src, dst) -> maximal taken count per entry into the loop
    std::map<std::pair<std::string, std::string>, std::uint32_t> loop_bounds;
    // optional typical iteration count per back edge (trace generation)
    std::map<std::pair<std::string, std::string>, std::uint32_t> typical_counts;
    // optional per-branch weights: block -> successor -> weight
    std::map<std::string, std::map<std::string, double>> branch_probs;
    // optional worst-case branch hint: block -> successor
    std::map<std::string, std::string> worst_succ;
};

/// A symbolic, layout-independent access event: either an instruction fetch
/// (width 16, exact code offset in the owner object) or a data access.
struct AccessEvent {
    bool is_fetch = true;
    std::string object;
    std::uint32_t lo = 0, hi = 0;  // byte offsets within object
    int width = 16;
    bool is_write = false;
};

class Program {
public:
    std::vector<MemoryObject> objects;   // declaration order
    std::vector<BasicBlock> blocks;      // declaration order
    FlowFacts flow;

    const MemoryObject &object(const std::string &id) const;
    const BasicBlock &block(const std::string &id) const;
    bool has_block(const std::string &id) const { return block_index_.count(id) != 0; }

    /// Byte offset of a block's code inside its owner object. Blocks of one
    /// owner are packed in declaration order, instr_count * 2 bytes each.
    std::uint32_t block_code_offset(const std::string &block_id) const;

    std::vector<std::string> successors(const std::string &block_id) const;
    std::vector<std::string> predecessors(const std::string &block_id) const;

    void rebuild_indices();

private:
    std::map<std::string, std::size_t> object_index_;
    std::map<std::string, std::size_t> block_index_;
    std::map<std::string, std::uint32_t> code_offset_;
    std::map<std::string, std::vector<std::string>> preds_;
};

/// Parse and validate a program file. Throws parse_error / validation_error.
Program load_program(const std::string &text);

/// Inverse of load_program for valid programs (round-trip identity).
std::string serialize_program(const Program &p);

/// Immediate-dominator based back-edge detection: edges (u,v) with v dom u.
std::set<std::pair<std::string, std::string>> find_back_edges(const Program &p);

/// Dominator sets over the CFG reachable from entry (iterative dataflow).
std::map<std::string, std::set<std::string>> compute_dominators(const Program &p);

/// Flatten a block into its ordered sequence of timed access events.
std::vector<AccessEvent> enumerate_access_events(const Program &p, const BasicBlock &b);

} // namespace wcetlab

#endif
