#include "app.hpp"

int main(int argc, char** argv) { return twistleaf::cli::run_app(argc, argv); }
