#include <pybind11/pybind11.h>
PYBIND11_MODULE(_idealab, m) { m.doc() = "wip"; }
