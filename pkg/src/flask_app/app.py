"""
Flask application serving EUP Coulomb spectra as JSON.
"""

from flask import Flask
from flask_cors import CORS
import logging
import os


def create_app(config_name='development'):
    """Application factory pattern."""
    app = Flask(__name__)

    # Configuration
    app.config['SECRET_KEY'] = os.environ.get('SECRET_KEY', 'dev-secret-key-change-in-production')
    app.config['JSON_SORT_KEYS'] = False
    app.config['TESTING'] = config_name == 'testing'

    if config_name != 'testing':
        logging.basicConfig(
            level=os.environ.get('LOG_LEVEL', 'INFO'),
            format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        )

    # Enable CORS for the API
    CORS(app, resources={r"/api/*": {"origins": "*"}})

    # Register blueprints
    from .routes.api import api_bp

    app.register_blueprint(api_bp, url_prefix='/api')

    # Error handlers
    @app.errorhandler(404)
    def not_found_error(error):
        return {'success': False, 'error': 'Resource not found'}, 404

    @app.errorhandler(500)
    def internal_error(error):
        return {'success': False, 'error': 'Internal server error'}, 500

    return app


if __name__ == '__main__':
    app = create_app()
    host = os.environ.get('FLASK_HOST', '0.0.0.0')
    port = int(os.environ.get('FLASK_PORT', 8080))
    app.run(debug=True, host=host, port=port)
