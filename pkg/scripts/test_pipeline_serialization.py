import logging

from haystack import Pipeline

logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")
logger = logging.getLogger(__name__)


def main() -> int:
    """
    Check that every pipeline configuration serializes and loads back without writing anything.
    """
    from mbcsma.pipelines import sim_pipelines

    success = True
    for pipeline_config in sim_pipelines:
        name = pipeline_config.get("name", "unknown")
        try:
            logger.info(f"Testing serialization of {name} sweep pipeline")
            Pipeline.loads(pipeline_config["pipeline"].dumps())
            logger.info(f"Successfully serialized {name} sweep pipeline")
        except Exception as e:
            logger.error(f"Error serializing {name} sweep pipeline: {str(e)}")
            success = False

    if success:
        logger.info("All pipelines serialized successfully!")
        return 0
    logger.error("Some pipelines failed to serialize. Check the logs above for details.")
    return 1


if __name__ == "__main__":
    exit(main())
