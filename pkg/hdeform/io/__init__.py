from hdeform.io.fixture import (Fixture, load_fixture, parse_fixture, read_fixture_file, serialize_fixture,
                                serialize_element, element_lines, dumps_fixture, save_fixture,
                                builtin_fixture_path, BUILTIN_FIXTURES, FIXTURE_EXTENSIONS)
