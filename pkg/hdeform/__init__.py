import os
from pathlib import Path

# Find the global path of hdeform
hdeform_global_path = Path(__file__).parent.absolute()

# Resources directory
RESOURCES_DIR = "resources"
FIXTURES_DIR = os.path.join(hdeform_global_path, RESOURCES_DIR, "fixtures")
fixture_template_path = os.path.join(hdeform_global_path, RESOURCES_DIR, "fixture_template.yaml")
