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

#include "wcetlab/program.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace wcetlab {

const MemoryObject &Program::object(const std::string &id) const {
    auto it = object_index_.find(id);
    if (it == object_index_.end())
        throw validation_error("unknown object '" + id + "'");
    return objects[it->second];
}

const BasicBlock &Program::block(const std::string &id) const {
    auto it = block_index_.find(id);
    if (it == block_index_.end())
        throw validation_error("unknown block '" + id + "'");
    return blocks[it->second];
}

std::uint32_t Program::block_code_offset(const std::string &block_id) const {
    auto it = code_offset_.find(block_id);
    if (it == code_offset_.end())
        throw validation_error("unknown block '" + block_id + "'");
    return it->second;
}

std::vector<std::string> Program::successors(const std::string &block_id) const {
    return block(block_id).successors;
}

std::vector<std::string> Program::predecessors(const std::string &block_id) const {
    auto it = preds_.find(block_id);
    return it == preds_.end() ? std::vector<std::string>{} : it->second;
}

void Program::rebuild_indices() {
    object_index_.clear();
    block_index_.clear();
    code_offset_.clear();
    preds_.clear();
    for (std::size_t i = 0; i < objects.size(); ++i)
        object_index_[objects[i].id] = i;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        block_index_[blocks[i].id] = i;
    std::map<std::string, std::uint32_t> owner_cursor;
    for (const auto &b : blocks) {
        code_offset_[b.id] = owner_cursor[b.owner];
        owner_cursor[b.owner] += b.instr_count * 2;
    }
    for (const auto &b : blocks)
        for (const auto &s : b.successors)
            preds_[s].push_back(b.id);
}

namespace {

// split on whitespace
std::vector<std::string> tokenize(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        if (tok[0] == '#')
            break;
        out.push_back(tok);
    }
    return out;
}

std::uint64_t parse_uint(const std::string &s, int line) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos, 0);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw parse_error(line, "expected a number, got '" + s + "'");
    }
}

// value of a key=value token, or nullopt
std::optional<std::string> kv(const std::string &tok, const std::string &key) {
    if (tok.rfind(key + "=", 0) == 0)
        return tok.substr(key.size() + 1);
    return std::nullopt;
}

void validate(Program &p) {
    p.rebuild_indices();

    std::set<std::string> object_ids, block_ids;
    for (const auto &o : p.objects) {
        if (!object_ids.insert(o.id).second)
            throw validation_error("duplicate object id '" + o.id + "'");
        if (o.size == 0)
            throw validation_error("object '" + o.id + "' has size 0");
        if (o.element_width != 8 && o.element_width != 16 && o.element_width != 32)
            throw validation_error("object '" + o.id + "' has invalid width");
        if (o.kind != ObjectKind::FunctionCode && o.size % (o.element_width / 8) != 0)
            throw validation_error("object '" + o.id + "' size is not a multiple of its element width");
    }
    for (const auto &b : p.blocks) {
        if (!block_ids.insert(b.id).second)
            throw validation_error("duplicate block id '" + b.id + "'");
        if (object_ids.count(b.id))
            throw validation_error("block id '" + b.id + "' collides with an object id");
        if (b.instr_count < 1)
            throw validation_error("block '" + b.id + "' has instr_count 0");
        if (b.successors.size() > 2)
            throw validation_error("block '" + b.id + "' has more than 2 successors");
        const auto &owner = p.object(b.owner);
        if (owner.kind != ObjectKind::FunctionCode)
            throw validation_error("block '" + b.id + "' owner is not function code");
        for (const auto &s : b.successors)
            if (!block_ids.count(s) && std::none_of(p.blocks.begin(), p.blocks.end(),
                                                    [&](const BasicBlock &x) { return x.id == s; }))
                throw validation_error("block '" + b.id + "' has unknown successor '" + s + "'");
        for (const auto &a : b.data_accesses) {
            const auto &t = p.object(a.target);
            if (a.lo > a.hi || a.hi >= t.size)
                throw validation_error("access in block '" + b.id + "' is out of range of '" + a.target + "'");
            if (t.kind != ObjectKind::FunctionCode && a.width != t.element_width)
                throw validation_error("access width in block '" + b.id +
                                       "' does not match element width of '" + a.target + "'");
            if (a.pos > b.instr_count)
                throw validation_error("access pos in block '" + b.id + "' exceeds instr count");
        }
    }
    // code footprint fits its owner
    std::map<std::string, std::uint64_t> footprint;
    for (const auto &b : p.blocks)
        footprint[b.owner] += b.instr_count * 2;
    for (const auto &[owner, bytes] : footprint)
        if (bytes > p.object(owner).size)
            throw validation_error("code of '" + owner + "' exceeds the declared object size");

    if (!block_ids.count(p.flow.entry))
        throw validation_error("entry block '" + p.flow.entry + "' does not exist");
    if (p.flow.exits.empty())
        throw validation_error("no exit block declared");
    for (const auto &e : p.flow.exits) {
        if (!block_ids.count(e))
            throw validation_error("exit block '" + e + "' does not exist");
        if (!p.block(e).successors.empty())
            throw validation_error("exit block '" + e + "' has successors");
    }

    // reachability from entry
    std::set<std::string> reached;
    std::deque<std::string> work{p.flow.entry};
    reached.insert(p.flow.entry);
    while (!work.empty()) {
        auto cur = work.front();
        work.pop_front();
        for (const auto &s : p.block(cur).successors)
            if (reached.insert(s).second)
                work.push_back(s);
    }
    for (const auto &b : p.blocks)
        if (!reached.count(b.id))
            throw validation_error("block '" + b.id + "' is unreachable from entry");

    // every back edge must carry a bound
    for (const auto &e : find_back_edges(p))
        if (!p.flow.loop_bounds.count(e))
            throw validation_error("unbounded back edge " + e.first + "->" + e.second);
    for (const auto &[e, n] : p.flow.loop_bounds) {
        if (!block_ids.count(e.first) || !block_ids.count(e.second))
            throw validation_error("loop bound on unknown edge " + e.first + "->" + e.second);
        auto t = p.flow.typical_counts.find(e);
        if (t != p.flow.typical_counts.end() && t->second > n)
            throw validation_error("typical count exceeds bound on " + e.first + "->" + e.second);
    }
    for (const auto &[blk, m] : p.flow.branch_probs)
        for (const auto &[succ, w] : m) {
            const auto &succs = p.block(blk).successors;
            if (std::find(succs.begin(), succs.end(), succ) == succs.end())
                throw validation_error("branch prob on non-edge " + blk + "->" + succ);
            if (w < 0)
                throw validation_error("negative branch weight on " + blk + "->" + succ);
        }
    for (const auto &[blk, succ] : p.flow.worst_succ) {
        const auto &succs = p.block(blk).successors;
        if (std::find(succs.begin(), succs.end(), succ) == succs.end())
            throw validation_error("worst-case hint on non-edge " + blk + "->" + succ);
    }
}

} // namespace

Program load_program(const std::string &text) {
    Program p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_entry = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty())
            continue;
        const std::string &dir = toks[0];
        if (dir == "OBJECT") {
            if (toks.size() < 3)
                throw parse_error(lineno, "OBJECT needs an id and a kind");
            MemoryObject o;
            o.id = toks[1];
            if (toks[2] == "function")
                o.kind = ObjectKind::FunctionCode;
            else if (toks[2] == "data")
                o.kind = ObjectKind::GlobalData;
            else if (toks[2] == "literal")
                o.kind = ObjectKind::LiteralPool;
            else
                throw parse_error(lineno, "unknown object kind '" + toks[2] + "'");
            o.element_width = o.kind == ObjectKind::FunctionCode ? 16 : 32;
            for (std::size_t i = 3; i < toks.size(); ++i) {
                if (auto v = kv(toks[i], "size"))
                    o.size = static_cast<std::uint32_t>(parse_uint(*v, lineno));
                else if (auto v2 = kv(toks[i], "width"))
                    o.element_width = static_cast<int>(parse_uint(*v2, lineno));
                else if (auto v3 = kv(toks[i], "accesses"))
                    o.access_count = parse_uint(*v3, lineno);
                else
                    throw parse_error(lineno, "unknown OBJECT attribute '" + toks[i] + "'");
            }
            p.objects.push_back(std::move(o));
        } else if (dir == "BLOCK") {
            if (toks.size() < 2)
                throw parse_error(lineno, "BLOCK needs an id");
            BasicBlock b;
            b.id = toks[1];
            for (std::size_t i = 2; i < toks.size(); ++i) {
                if (auto v = kv(toks[i], "owner"))
                    b.owner = *v;
                else if (auto v2 = kv(toks[i], "instrs"))
                    b.instr_count = static_cast<std::uint32_t>(parse_uint(*v2, lineno));
                else if (auto v3 = kv(toks[i], "succ")) {
                    std::istringstream ss(*v3);
                    std::string s;
                    while (std::getline(ss, s, ','))
                        if (!s.empty())
                            b.successors.push_back(s);
                } else
                    throw parse_error(lineno, "unknown BLOCK attribute '" + toks[i] + "'");
            }
            if (b.owner.empty())
                throw parse_error(lineno, "BLOCK '" + b.id + "' is missing owner=");
            p.blocks.push_back(std::move(b));
        } else if (dir == "ACCESS") {
            if (toks.size() < 2)
                throw parse_error(lineno, "ACCESS needs a block id");
            DataAccess a;
            const std::string blk = toks[1];
            for (std::size_t i = 2; i < toks.size(); ++i) {
                if (auto v = kv(toks[i], "pos"))
                    a.pos = static_cast<std::uint32_t>(parse_uint(*v, lineno));
                else if (auto v2 = kv(toks[i], "obj"))
                    a.target = *v2;
                else if (auto v3 = kv(toks[i], "lo"))
                    a.lo = static_cast<std::uint32_t>(parse_uint(*v3, lineno));
                else if (auto v4 = kv(toks[i], "hi"))
                    a.hi = static_cast<std::uint32_t>(parse_uint(*v4, lineno));
                else if (auto v5 = kv(toks[i], "width"))
                    a.width = static_cast<int>(parse_uint(*v5, lineno));
                else if (toks[i] == "write")
                    a.is_write = true;
                else
                    throw parse_error(lineno, "unknown ACCESS attribute '" + toks[i] + "'");
            }
            auto it = std::find_if(p.blocks.begin(), p.blocks.end(),
                                   [&](const BasicBlock &b) { return b.id == blk; });
            if (it == p.blocks.end())
                throw parse_error(lineno, "ACCESS refers to unknown block '" + blk + "'");
            it->data_accesses.push_back(a);
        } else if (dir == "ENTRY") {
            if (toks.size() != 2)
                throw parse_error(lineno, "ENTRY needs exactly one block id");
            p.flow.entry = toks[1];
            have_entry = true;
        } else if (dir == "EXIT") {
            if (toks.size() != 2)
                throw parse_error(lineno, "EXIT needs exactly one block id");
            p.flow.exits.insert(toks[1]);
        } else if (dir == "LOOPBOUND") {
            if (toks.size() < 3)
                throw parse_error(lineno, "LOOPBOUND needs an edge and a bound");
            auto arrow = toks[1].find("->");
            if (arrow == std::string::npos)
                throw parse_error(lineno, "LOOPBOUND edge must be <src>-><dst>");
            auto edge = std::make_pair(toks[1].substr(0, arrow), toks[1].substr(arrow + 2));
            p.flow.loop_bounds[edge] = static_cast<std::uint32_t>(parse_uint(toks[2], lineno));
            for (std::size_t i = 3; i < toks.size(); ++i) {
                if (auto v = kv(toks[i], "typical"))
                    p.flow.typical_counts[edge] = static_cast<std::uint32_t>(parse_uint(*v, lineno));
                else
                    throw parse_error(lineno, "unknown LOOPBOUND attribute '" + toks[i] + "'");
            }
        } else if (dir == "BRANCHPROB") {
            if (toks.size() < 3)
                throw parse_error(lineno, "BRANCHPROB needs a block and weights");
            for (std::size_t i = 2; i < toks.size(); ++i) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw parse_error(lineno, "BRANCHPROB weight must be <succ>=<w>");
                p.flow.branch_probs[toks[1]][toks[i].substr(0, eq)] =
                    std::stod(toks[i].substr(eq + 1));
            }
        } else if (dir == "WORST") {
            if (toks.size() != 3)
                throw parse_error(lineno, "WORST needs a block and a successor");
            p.flow.worst_succ[toks[1]] = toks[2];
        } else {
            throw parse_error(lineno, "unknown directive '" + dir + "'");
        }
    }
    if (!have_entry)
        throw validation_error("no ENTRY declared");
    for (auto &b : p.blocks)
        std::stable_sort(b.data_accesses.begin(), b.data_accesses.end(),
                         [](const DataAccess &x, const DataAccess &y) { return x.pos < y.pos; });
    validate(p);
    return p;
}

std::string serialize_program(const Program &p) {
    std::ostringstream out;
    for (const auto &o : p.objects) {
        const char *kind = o.kind == ObjectKind::FunctionCode ? "function"
                           : o.kind == ObjectKind::GlobalData ? "data"
                                                              : "literal";
        out << "OBJECT " << o.id << ' ' << kind << " size=" << o.size << " width=" << o.element_width
            << " accesses=" << o.access_count << '\n';
    }
    for (const auto &b : p.blocks) {
        out << "BLOCK " << b.id << " owner=" << b.owner << " instrs=" << b.instr_count;
        if (!b.successors.empty()) {
            out << " succ=";
            for (std::size_t i = 0; i < b.successors.size(); ++i)
                out << (i ? "," : "") << b.successors[i];
        }
        out << '\n';
        for (const auto &a : b.data_accesses) {
            out << "ACCESS " << b.id << " pos=" << a.pos << " obj=" << a.target << " lo=" << a.lo
                << " hi=" << a.hi << " width=" << a.width;
            if (a.is_write)
                out << " write";
            out << '\n';
        }
    }
    out << "ENTRY " << p.flow.entry << '\n';
    for (const auto &e : p.flow.exits)
        out << "EXIT " << e << '\n';
    for (const auto &[e, n] : p.flow.loop_bounds) {
        out << "LOOPBOUND " << e.first << "->" << e.second << ' ' << n;
        auto t = p.flow.typical_counts.find(e);
        if (t != p.flow.typical_counts.end())
            out << " typical=" << t->second;
        out << '\n';
    }
    for (const auto &[blk, m] : p.flow.branch_probs) {
        out << "BRANCHPROB " << blk;
        for (const auto &[succ, w] : m)
            out << ' ' << succ << '=' << w;
        out << '\n';
    }
    for (const auto &[blk, succ] : p.flow.worst_succ)
        out << "WORST " << blk << ' ' << succ << '\n';
    return out.str();
}

std::map<std::string, std::set<std::string>> compute_dominators(const Program &p) {
    std::vector<std::string> ids;
    for (const auto &b : p.blocks)
        ids.push_back(b.id);
    std::set<std::string> all(ids.begin(), ids.end());

    std::map<std::string, std::set<std::string>> dom;
    for (const auto &id : ids)
        dom[id] = id == p.flow.entry ? std::set<std::string>{id} : all;

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto &id : ids) {
            if (id == p.flow.entry)
                continue;
            std::set<std::string> nd;
            bool first = true;
            for (const auto &pred : p.predecessors(id)) {
                if (first) {
                    nd = dom[pred];
                    first = false;
                } else {
                    std::set<std::string> inter;
                    std::set_intersection(nd.begin(), nd.end(), dom[pred].begin(), dom[pred].end(),
                                          std::inserter(inter, inter.begin()));
                    nd = std::move(inter);
                }
            }
            nd.insert(id);
            if (nd != dom[id]) {
                dom[id] = std::move(nd);
                changed = true;
            }
        }
    }
    return dom;
}

std::set<std::pair<std::string, std::string>> find_back_edges(const Program &p) {
    auto dom = compute_dominators(p);
    std::set<std::pair<std::string, std::string>> back;
    for (const auto &b : p.blocks)
        for (const auto &s : b.successors)
            if (dom[b.id].count(s))
                back.insert({b.id, s});
    return back;
}

std::vector<AccessEvent> enumerate_access_events(const Program &p, const BasicBlock &b) {
    std::vector<AccessEvent> events;
    events.reserve(b.instr_count + b.data_accesses.size());
    const std::uint32_t base = p.block_code_offset(b.id);
    std::size_t next_access = 0;
    for (std::uint32_t i = 0; i <= b.instr_count; ++i) {
        while (next_access < b.data_accesses.size() && b.data_accesses[next_access].pos == i) {
            const auto &a = b.data_accesses[next_access++];
            events.push_back({false, a.target, a.lo, a.hi, a.width, a.is_write});
        }
        if (i < b.instr_count)
            events.push_back({true, b.owner, base + 2 * i, base + 2 * i, 16, false});
    }
    return events;
}

} // namespace wcetlab
