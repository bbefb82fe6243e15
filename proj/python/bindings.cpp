/*
 * Copyright 2026 The vplat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vplat/campaign.hpp"
#include "vplat/coverage.hpp"
#include "vplat/error.hpp"
#include "vplat/fault.hpp"
#include "vplat/isa.hpp"
#include "vplat/loader.hpp"
#include "vplat/platform.hpp"
#include "vplat/scenario.hpp"
#include "vplat/simulator.hpp"
#include "vplat/trace.hpp"

namespace py = pybind11;
using namespace vplat;

namespace {

// Owns the simulator plus the campaign it was given, so the Python object
// stays valid on its own.
struct PySimulator {
  explicit PySimulator(const std::string& platform_text)
      : sim(std::make_unique<Simulator>(parse_platform(platform_text))) {}

  std::uint32_t load(py::bytes image, std::optional<std::uint32_t> load_address) {
    const std::string data = image;
    const LoadedImage loaded = load_binary(
        *sim, {reinterpret_cast<const std::uint8_t*>(data.data()), data.size()}, load_address);
    return loaded.entry;
  }

  void attach_campaign(const std::string& text, std::optional<std::uint64_t> seed) {
    sim->attach_campaign(compile_campaign(parse_campaign(text), sim->config()), seed);
  }

  std::string step() { return format_trace_line(sim->step()); }

  std::string run(std::uint64_t max_steps) {
    std::string out;
    for (std::uint64_t i = 0; i < max_steps && !sim->cpu().halted; ++i)
      out += format_trace_line(sim->step()) + '\n';
    return out;
  }

  py::object peek(std::uint32_t address, unsigned width) const {
    const auto v = sim->peek(address, width);
    return v ? py::object(py::int_(*v)) : py::object(py::none());
  }

  bool poke(std::uint32_t address, py::bytes data) {
    const std::string s = data;
    return sim->poke(address, {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  }

  py::object trap() const {
    const auto& t = sim->cpu().pending_trap;
    if (!t) return py::none();
    return py::make_tuple(std::string(trap_name(t->cause)), t->value);
  }

  std::unique_ptr<Simulator> sim;
};

py::dict result_dict(const RunResult& r) {
  py::dict d;
  d["verdict"] = verdict_json(r.verdict);
  d["outcome"] = std::string(outcome_name(r.verdict.outcome));
  d["trace"] = r.trace;
  d["fault_log"] = r.fault_log;
  d["coverage"] = r.coverage.render();
  d["console"] = r.console;
  d["image_hash_before"] = r.image_hash_before;
  d["image_hash_after"] = r.image_hash_after;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vplat, m) {
  m.doc() = "RV32I virtual platform with fault injection";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("disassemble", [](std::uint32_t word) -> py::object {
    const auto d = try_decode(word);
    if (!d) return py::none();
    return py::str(std::string(mnemonic(d->op)));
  });

  m.def("normalize_platform", [](const std::string& text) {
    return render_platform(parse_platform(text));
  }, py::arg("text"));
  m.def("normalize_campaign", [](const std::string& text) {
    return render_campaign(parse_campaign(text));
  }, py::arg("text"));
  m.def("image_hash", [](py::bytes image) {
    const std::string s = image;
    return image_hash({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  });

  py::class_<PySimulator>(m, "Simulator")
      .def(py::init<const std::string&>(), py::arg("platform_text"))
      .def("load", &PySimulator::load, py::arg("image"), py::arg("load_address") = py::none())
      .def("attach_campaign", &PySimulator::attach_campaign, py::arg("text"),
           py::arg("seed") = py::none())
      .def("step", &PySimulator::step)
      .def("run", &PySimulator::run, py::arg("max_steps") = 10'000'000)
      .def("reg", [](const PySimulator& s, unsigned i) {
        if (i >= kNumRegs) throw py::index_error("register index out of range");
        return s.sim->cpu().reg(i);
      })
      .def("regs", [](const PySimulator& s) {
        const auto& r = s.sim->cpu().regs();
        return std::vector<std::uint32_t>(r.begin(), r.end());
      })
      .def("peek", &PySimulator::peek, py::arg("address"), py::arg("width") = 4)
      .def("poke", &PySimulator::poke, py::arg("address"), py::arg("data"))
      .def("snapshot", [](const PySimulator& s) { return s.sim->snapshot(); })
      .def_property_readonly("pc", [](const PySimulator& s) { return s.sim->cpu().pc; })
      .def_property_readonly("cycles", [](const PySimulator& s) { return s.sim->cpu().cycles; })
      .def_property_readonly("halted", [](const PySimulator& s) { return s.sim->cpu().halted; })
      .def_property_readonly("exit_code",
                             [](const PySimulator& s) { return s.sim->cpu().exit_code; })
      .def_property_readonly("trap", &PySimulator::trap)
      .def_property_readonly("fault_log",
                             [](const PySimulator& s) { return s.sim->fault_log().render(); });

  m.def("run_scenario",
        [](const std::filesystem::path& path, std::optional<std::uint64_t> seed, bool trace,
           std::optional<std::filesystem::path> out_dir) {
          RunOptions options;
          options.trace = trace;
          options.seed_override = seed;
          const TestScenario sc = parse_scenario(read_text(path), path.parent_path());
          RunResult r;
          {
            py::gil_scoped_release release;
            r = run_scenario(sc, options);
          }
          if (out_dir) write_artifacts(r, *out_dir);
          return result_dict(r);
        },
        py::arg("path"), py::arg("seed") = py::none(), py::arg("trace") = true,
        py::arg("out_dir") = py::none());

  m.def("run_campaign",
        [](const std::filesystem::path& list, unsigned jobs, std::optional<std::uint64_t> seed,
           std::optional<std::filesystem::path> out_dir) {
          BatchOptions options;
          options.jobs = jobs;
          options.run.seed_override = seed;
          options.run.trace = false;
          options.out_dir = out_dir;
          const auto scenarios = parse_scenario_list(read_text(list), list.parent_path());
          BatchResult r;
          {
            py::gil_scoped_release release;
            r = run_batch(scenarios, options);
          }
          py::dict d;
          d["report"] = r.report;
          d["summary"] = r.summary;
          d["all_passed"] = r.all_passed();
          return d;
        },
        py::arg("list_path"), py::arg("jobs") = 1, py::arg("seed") = py::none(),
        py::arg("out_dir") = py::none());

  m.def("merge_coverage", [](const std::vector<std::string>& texts) {
    std::vector<CoverageReport> reports;
    for (const auto& t : texts) reports.push_back(parse_coverage(t));
    const auto merged = merge_coverage(reports);
    return py::make_tuple(merged.render(), merged.instruction_percent(),
                          merged.branch_percent());
  });

  m.def("diff_traces", [](const std::string& a, const std::string& b) -> py::object {
    const TraceDiff d = diff_traces(a, b);
    if (d.equal) return py::none();
    py::dict out;
    out["line"] = d.line;
    out["cycle"] = d.cycle;
    out["field"] = d.field;
    out["a"] = d.a;
    out["b"] = d.b;
    return out;
  });
}
