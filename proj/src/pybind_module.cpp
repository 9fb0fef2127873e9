#include <pybind11/pybind11.h>

namespace py = pybind11;

PYBIND11_MODULE(_cyclo, m) {
  m.doc() = "cyclotomic associator workbench";
  m.attr("__version__") = "0.1.0";
}
