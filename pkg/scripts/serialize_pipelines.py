import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from haystack import Pipeline

load_dotenv()

logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")
logger = logging.getLogger(__name__)


def load_yaml_if_exists(file_path: Path) -> Optional[str]:
    """
    Load YAML file content if it exists.

    :param file_path: Path to the YAML file
    :return: Content of the YAML file if it exists, None otherwise
    """
    if file_path.exists():
        return file_path.read_text()
    return None


def prepare_yaml_string(pipeline: Pipeline) -> str:
    """
    Convert a sweep pipeline to YAML, with its declared inputs and outputs at top level.

    :param pipeline: The pipeline to convert
    :return: The YAML representation of the pipeline
    """
    pipeline_yaml_dict = yaml.safe_load(pipeline.dumps())
    pipeline_yaml_dict["inputs"] = pipeline.metadata.get("inputs", {})
    pipeline_yaml_dict["outputs"] = pipeline.metadata.get("outputs", {})
    return yaml.dump(pipeline_yaml_dict, default_flow_style=False)


def process_pipeline(pipeline_dict: Dict[str, Any]) -> bool:
    """
    Write one pipeline configuration to dist/pipelines/<name>/sweep.yml.

    :param pipeline_dict: Dictionary containing pipeline configuration
    :return: True if the file changed, False otherwise
    """
    name = pipeline_dict["name"]

    sweep_yaml = prepare_yaml_string(pipeline_dict["pipeline"])
    sweep_yaml_path = Path("dist") / "pipelines" / name / "sweep.yml"

    if load_yaml_if_exists(sweep_yaml_path) == sweep_yaml:
        logger.info(f"Sweep pipeline {name} has not changed. Skipping.")
        return False

    sweep_yaml_path.parent.mkdir(parents=True, exist_ok=True)
    sweep_yaml_path.write_text(sweep_yaml)
    logger.info(f"Saved YAML to: {sweep_yaml_path}")
    return True


def main() -> bool:
    """
    Serialize every pipeline configuration.

    :return: True if any pipeline failed to serialize
    """
    from mbcsma.pipelines import sim_pipelines

    any_errors = False
    for pipeline_config in sim_pipelines:
        try:
            process_pipeline(pipeline_config)
        except Exception as e:
            logger.error(f"Error processing pipeline {pipeline_config.get('name', 'unknown')}: {str(e)}")
            any_errors = True

    return any_errors


if __name__ == "__main__":
    exit(1 if main() else 0)
