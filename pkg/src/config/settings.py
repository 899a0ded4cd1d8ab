"""Configuration settings for the exact coherence toolkit"""
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

class Settings:

    # Document settings
    APP_TITLE = "Exact Coherence Toolkit"
    APP_VERSION = "1.0.0"
    SCHEMA_VERSION = os.getenv("SCHEMA_VERSION", "1")
    SCHEMAS_DIR = os.getenv("SCHEMAS_DIR", "schemas")

    # Vertex enumeration limits for separating measures
    MAX_ENUM_STATES = int(os.getenv("MAX_ENUM_STATES", "10"))
    MAX_ENUM_GENERATORS = int(os.getenv("MAX_ENUM_GENERATORS", "12"))

    # Simplex engine
    VERIFY_SOLUTIONS = os.getenv("VERIFY_SOLUTIONS", "true").lower() == "true"
    MAX_PIVOTS = int(os.getenv("MAX_PIVOTS", "100000"))

    # Tail model
    DANIELL_WINDOW = int(os.getenv("DANIELL_WINDOW", "10"))
    MAX_WINDOW = int(os.getenv("MAX_WINDOW", "1000"))

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"

settings = Settings()
