"""WSGI entry point for the spectrum API (gunicorn wsgi:app)."""

from src.flask_app.app import create_app

# Create the Flask application instance
app = create_app('production')
