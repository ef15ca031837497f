#include "mslv/io.hpp"

int main(int argc, char** argv) {
    return mslv::cli_main(argc, argv);
}
